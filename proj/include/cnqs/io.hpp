// Copyright 2026 The cnqs Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// JSON and text formats. Vertex and site labels are 1-based in every file;
// complex numbers are written as [re, im] and read from either [re, im] or
// a plain number.

#ifndef CNQS_IO_HPP
#define CNQS_IO_HPP

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include <json.hpp>

#include "cnqs/errors.hpp"
#include "cnqs/graph.hpp"
#include "cnqs/jastrow.hpp"
#include "cnqs/nqs.hpp"
#include "cnqs/oracle.hpp"
#include "cnqs/stabilizer.hpp"
#include "cnqs/vmc.hpp"

namespace cnqs::io {

using json = nlohmann::ordered_json;

inline json parse_json(std::istream& in, const std::string& source) {
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(source + ": " + e.what());
  }
}

inline json parse_json_text(const std::string& text, const std::string& source) {
  std::istringstream in(text);
  return parse_json(in, source);
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open " + path);
  return parse_json(in, path);
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ArgumentError("cannot write " + path);
  out << content;
}

namespace detail {

[[noreturn]] inline void fail(const std::string& where, const std::string& what) {
  throw ParseError(where + ": " + what);
}

inline const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) fail(where, std::string("missing field \"") + key + "\"");
  return *it;
}

inline std::string child(const std::string& where, const char* key) { return where + "/" + key; }
inline std::string child(const std::string& where, std::size_t i) { return where + "/" + std::to_string(i); }

inline std::size_t size_value(const json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<long long>() < 0) fail(where, "expected a non-negative integer");
  return j.get<std::size_t>();
}

inline double real_value(const json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  return j.get<double>();
}

/// 1-based label to 0-based index, checked against n.
inline std::size_t label(const json& j, std::size_t n, const std::string& where) {
  const std::size_t v = size_value(j, where);
  if (v < 1 || v > n) fail(where, "label " + std::to_string(v) + " outside 1.." + std::to_string(n));
  return v - 1;
}

inline const json& array(const json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array");
  return j;
}

}  // namespace detail

inline json to_json(Complex z) { return json::array({z.real(), z.imag()}); }

inline Complex complex_from_json(const json& j, const std::string& where = "") {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  detail::fail(where, "expected a number or [re, im]");
}

inline json to_json(const Mat2& m) {
  return json::array({json::array({to_json(m(0, 0)), to_json(m(0, 1))}), json::array({to_json(m(1, 0)), to_json(m(1, 1))})});
}

inline Mat2 mat2_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_array() || !j[1].is_array() || j[0].size() != 2 || j[1].size() != 2) {
    detail::fail(where, "expected a 2x2 matrix [[a, b], [c, d]]");
  }
  return Mat2::make(complex_from_json(j[0][0], where + "/0/0"), complex_from_json(j[0][1], where + "/0/1"),
                    complex_from_json(j[1][0], where + "/1/0"), complex_from_json(j[1][1], where + "/1/1"));
}

// ---------------------------------------------------------------------------
// Graph: {"n": 4, "edges": [[1, 2], [2, 3]]}

inline json to_json(const Graph& g) {
  json edges = json::array();
  for (const auto& e : g.edges()) edges.push_back(json::array({e.s + 1, e.t + 1}));
  return json{{"n", g.order()}, {"edges", edges}};
}

inline Graph graph_from_json(const json& j, const std::string& where = "") {
  const std::size_t n = detail::size_value(detail::field(j, "n", where), detail::child(where, "n"));
  std::vector<Edge> edges;
  const std::string ew = detail::child(where, "edges");
  const json& list = detail::array(detail::field(j, "edges", where), ew);
  for (std::size_t k = 0; k < list.size(); ++k) {
    const std::string w = detail::child(ew, k);
    const json& e = list[k];
    if (!e.is_array() || e.size() != 2) detail::fail(w, "expected an edge [s, t]");
    const std::size_t s = detail::label(e[0], n, w + "/0");
    const std::size_t t = detail::label(e[1], n, w + "/1");
    if (s == t) detail::fail(w, "self-loop");
    edges.push_back(make_edge(s, t));
  }
  return Graph(n, edges);
}

// ---------------------------------------------------------------------------
// Jastrow state:
// {"n": 3, "biases": [[0.1, 0], ...], "edges": [{"s": 1, "t": 2, "V": [0.3, -0.2]}, ...]}

inline json to_json(const JastrowState& s) {
  json biases = json::array();
  for (const auto& c : s.biases()) biases.push_back(to_json(c));
  json edges = json::array();
  const auto& list = s.graph().edges();
  for (std::size_t k = 0; k < list.size(); ++k) {
    edges.push_back(json{{"s", list[k].s + 1}, {"t", list[k].t + 1}, {"V", to_json(s.edge_interactions()[k])}});
  }
  return json{{"n", s.size()}, {"biases", biases}, {"edges", edges}};
}

inline JastrowState jastrow_from_json(const json& j, const std::string& where = "") {
  const std::size_t n = detail::size_value(detail::field(j, "n", where), detail::child(where, "n"));
  std::vector<Complex> biases(n);
  if (j.contains("biases")) {
    const std::string bw = detail::child(where, "biases");
    const json& list = detail::array(j["biases"], bw);
    if (list.size() != n) detail::fail(bw, "expected " + std::to_string(n) + " biases");
    for (std::size_t k = 0; k < n; ++k) biases[k] = complex_from_json(list[k], detail::child(bw, k));
  }
  std::vector<Edge> edges;
  std::map<Edge, Complex> v;
  const std::string ew = detail::child(where, "edges");
  const json& list = detail::array(detail::field(j, "edges", where), ew);
  for (std::size_t k = 0; k < list.size(); ++k) {
    const std::string w = detail::child(ew, k);
    const std::size_t s = detail::label(detail::field(list[k], "s", w), n, w + "/s");
    const std::size_t t = detail::label(detail::field(list[k], "t", w), n, w + "/t");
    if (s == t) detail::fail(w, "self-loop");
    const Edge e = make_edge(s, t);
    if (v.count(e)) detail::fail(w, "duplicate edge");
    edges.push_back(e);
    v[e] = list[k].contains("V") ? complex_from_json(list[k]["V"], w + "/V") : Complex{};
  }
  return JastrowState(Graph(n, edges), std::move(biases), v);
}

// ---------------------------------------------------------------------------
// NQS network:
// {"n_visible": 2, "visible_diag": [[d+, d-], ...],
//  "hidden": [{"couplings": [{"site": 1, "matrix": [[..], [..]]}, ...]}, ...]}

inline json to_json(const NqsNetwork& nqs) {
  json diag = json::array();
  for (const auto& d : nqs.visible_diag()) diag.push_back(json::array({to_json(d[0]), to_json(d[1])}));
  json hidden = json::array();
  for (const auto& unit : nqs.hidden()) {
    json couplings = json::array();
    for (const auto& [site, c] : unit.couplings) couplings.push_back(json{{"site", site + 1}, {"matrix", to_json(c)}});
    hidden.push_back(json{{"couplings", couplings}});
  }
  return json{{"n_visible", nqs.n_visible()}, {"hidden_units", nqs.hidden_count()}, {"visible_diag", diag},
              {"hidden", hidden}};
}

inline NqsNetwork nqs_from_json(const json& j, const std::string& where = "") {
  const std::size_t n = detail::size_value(detail::field(j, "n_visible", where), detail::child(where, "n_visible"));
  std::vector<DiagFactor> diag(n, DiagFactor{1.0, 1.0});
  if (j.contains("visible_diag")) {
    const std::string dw = detail::child(where, "visible_diag");
    const json& list = detail::array(j["visible_diag"], dw);
    if (list.size() != n) detail::fail(dw, "expected " + std::to_string(n) + " entries");
    for (std::size_t k = 0; k < n; ++k) {
      const std::string w = detail::child(dw, k);
      if (!list[k].is_array() || list[k].size() != 2) detail::fail(w, "expected [d(+1), d(-1)]");
      diag[k] = {complex_from_json(list[k][0], w + "/0"), complex_from_json(list[k][1], w + "/1")};
    }
  }
  std::vector<HiddenUnit> hidden;
  const std::string hw = detail::child(where, "hidden");
  const json& units = detail::array(detail::field(j, "hidden", where), hw);
  for (std::size_t i = 0; i < units.size(); ++i) {
    const std::string uw = detail::child(hw, i);
    const std::string cw = detail::child(uw, "couplings");
    const json& list = detail::array(detail::field(units[i], "couplings", uw), cw);
    HiddenUnit unit;
    for (std::size_t k = 0; k < list.size(); ++k) {
      const std::string w = detail::child(cw, k);
      const std::size_t site = detail::label(detail::field(list[k], "site", w), n, w + "/site");
      if (!unit.couplings.emplace(site, mat2_from_json(detail::field(list[k], "matrix", w), w + "/matrix")).second) {
        detail::fail(w, "site coupled twice to the same hidden unit");
      }
    }
    hidden.push_back(std::move(unit));
  }
  try {
    return NqsNetwork(n, std::move(hidden), std::move(diag));
  } catch (const Error& e) {
    detail::fail(where.empty() ? "/" : where, e.what());
  }
}

// ---------------------------------------------------------------------------
// RBM parameters: {"a": [...], "b": [...], "w": [[...], ...]}, w is M x N.

template <typename T>
json rbm_to_json(const BasicRbmParams<T>& p) {
  auto value = [](const T& x) {
    if constexpr (std::is_same_v<T, double>) {
      return json(x);
    } else {
      return to_json(x);
    }
  };
  json a = json::array(), b = json::array(), w = json::array();
  for (const auto& x : p.a) a.push_back(value(x));
  for (const auto& x : p.b) b.push_back(value(x));
  for (std::size_t i = 0; i < p.n_hidden(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < p.n_visible(); ++j) row.push_back(value(p.weight(i, j)));
    w.push_back(row);
  }
  return json{{"a", a}, {"b", b}, {"w", w}};
}

inline json to_json(const RbmParams& p) { return rbm_to_json(p); }
inline json to_json(const RealRbmParams& p) { return rbm_to_json(p); }

inline RbmParams rbm_from_json(const json& j, const std::string& where = "") {
  const json& a = detail::array(detail::field(j, "a", where), detail::child(where, "a"));
  const json& b = detail::array(detail::field(j, "b", where), detail::child(where, "b"));
  const json& w = detail::array(detail::field(j, "w", where), detail::child(where, "w"));
  RbmParams p(a.size(), b.size());
  for (std::size_t k = 0; k < a.size(); ++k) p.a[k] = complex_from_json(a[k], where + "/a/" + std::to_string(k));
  for (std::size_t k = 0; k < b.size(); ++k) p.b[k] = complex_from_json(b[k], where + "/b/" + std::to_string(k));
  if (w.size() != b.size()) detail::fail(where + "/w", "expected one row per hidden unit");
  for (std::size_t i = 0; i < w.size(); ++i) {
    const std::string rw = where + "/w/" + std::to_string(i);
    if (!w[i].is_array() || w[i].size() != a.size()) detail::fail(rw, "expected one entry per visible unit");
    for (std::size_t jj = 0; jj < a.size(); ++jj) p.w[i * a.size() + jj] = complex_from_json(w[i][jj], rw);
  }
  return p;
}

// ---------------------------------------------------------------------------
// Tableaux. Text: one generator per line ("+XZZXI"); blank lines and '#'
// comments ignored. JSON: {"generators": ["+XZZXI", ...]}.

inline CheckMatrix tableau_from_text(std::istream& in, const std::string& source) {
  std::vector<PauliString> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    const std::string text = line.substr(first, last - first + 1);
    try {
      rows.push_back(PauliString::parse(text));
    } catch (const ParseError& e) {
      throw ParseError(source + ":" + std::to_string(lineno) + ": " + e.what());
    }
    if (!rows.empty() && rows.back().size() != rows.front().size()) {
      throw ParseError(source + ":" + std::to_string(lineno) + ": generator length differs from the first line");
    }
  }
  if (rows.empty()) throw ParseError(source + ": no generators");
  return CheckMatrix(std::move(rows));
}

inline std::string tableau_to_text(const CheckMatrix& cm) {
  std::string out;
  for (const auto& s : cm.to_strings()) out += s + "\n";
  return out;
}

inline json to_json(const CheckMatrix& cm) { return json{{"n", cm.qubits()}, {"generators", cm.to_strings()}}; }

inline CheckMatrix tableau_from_json(const json& j, const std::string& where = "") {
  const std::string gw = detail::child(where, "generators");
  const json& list = detail::array(detail::field(j, "generators", where), gw);
  std::vector<PauliString> rows;
  for (std::size_t k = 0; k < list.size(); ++k) {
    if (!list[k].is_string()) detail::fail(detail::child(gw, k), "expected a Pauli string");
    try {
      rows.push_back(PauliString::parse(list[k].get<std::string>()));
    } catch (const ParseError& e) {
      detail::fail(detail::child(gw, k), e.what());
    }
    if (rows.back().size() != rows.front().size()) detail::fail(detail::child(gw, k), "generator length differs");
  }
  if (rows.empty()) detail::fail(gw, "no generators");
  return CheckMatrix(std::move(rows));
}

/// Reads a tableau from a .json file or a text file.
inline CheckMatrix read_tableau_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open " + path);
  if (path.size() >= 5 && path.ends_with(".json")) return tableau_from_json(parse_json(in, path), path);
  return tableau_from_text(in, path);
}

// ---------------------------------------------------------------------------
// Dense state export: <base>.bin holds little-endian (re, im) doubles,
// <base>.json the header.

inline json dense_header(const DenseState& s) {
  return json{{"n", s.n},
              {"dimension", s.dimension()},
              {"dtype", "complex128"},
              {"layout", "interleaved re, im"},
              {"byte_order", "little"},
              {"index", "bit n-1-j holds q_j of site j (site 1 most significant), v = 1 - 2q"}};
}

inline void write_dense_binary(const DenseState& s, std::ostream& out) {
  static_assert(sizeof(double) == 8);
  for (const auto& a : s.amplitudes) {
    for (double x : {a.real(), a.imag()}) {
      std::uint64_t bits;
      std::memcpy(&bits, &x, 8);
      if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
      char bytes[8];
      std::memcpy(bytes, &bits, 8);
      out.write(bytes, 8);
    }
  }
}

inline DenseState read_dense_binary(std::istream& in, std::size_t n) {
  DenseState s(n);
  for (auto& a : s.amplitudes) {
    double parts[2];
    for (double& x : parts) {
      char bytes[8];
      if (!in.read(bytes, 8)) throw ParseError("dense state file is truncated");
      std::uint64_t bits;
      std::memcpy(&bits, bytes, 8);
      if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
      std::memcpy(&x, &bits, 8);
    }
    a = {parts[0], parts[1]};
  }
  return s;
}

inline void export_dense(const DenseState& s, const std::string& base) {
  std::ofstream bin(base + ".bin", std::ios::binary);
  if (!bin) throw ArgumentError("cannot write " + base + ".bin");
  write_dense_binary(s, bin);
  write_file(base + ".json", dense_header(s).dump(2) + "\n");
}

inline void write_dense_csv(const DenseState& s, std::ostream& out) {
  out << "index,re,im\n" << std::setprecision(17);
  for (std::size_t i = 0; i < s.dimension(); ++i) out << i << ',' << s[i].real() << ',' << s[i].imag() << '\n';
}

// ---------------------------------------------------------------------------
// VMC configuration and results.

inline json to_json(const VmcConfig& c) {
  return json{{"n", c.n},
              {"m", c.m},
              {"delta", c.delta},
              {"p_cap", c.p_cap},
              {"sweeps", c.sweeps},
              {"samples_per_sweep", c.samples_per_sweep},
              {"learning_rate", c.learning_rate},
              {"sr_shift", c.sr_shift},
              {"seed", c.seed},
              {"chains", c.chains},
              {"sample_interval", c.sample_interval},
              {"thermalization", c.thermalization},
              {"init_scale", c.init_scale},
              {"exact", c.exact}};
}

/// Fields missing from the JSON keep their defaults; unknown fields are errors.
inline VmcConfig vmc_config_from_json(const json& j, VmcConfig c = {}) {
  if (!j.is_object()) detail::fail("/", "expected an object");
  for (const auto& [key, value] : j.items()) {
    const std::string w = "/" + key;
    if (key == "n") c.n = detail::size_value(value, w);
    else if (key == "m") c.m = detail::size_value(value, w);
    else if (key == "delta") c.delta = detail::real_value(value, w);
    else if (key == "p_cap") c.p_cap = detail::real_value(value, w);
    else if (key == "sweeps") c.sweeps = detail::size_value(value, w);
    else if (key == "samples_per_sweep") c.samples_per_sweep = detail::size_value(value, w);
    else if (key == "learning_rate") c.learning_rate = detail::real_value(value, w);
    else if (key == "sr_shift") c.sr_shift = detail::real_value(value, w);
    else if (key == "seed") c.seed = detail::size_value(value, w);
    else if (key == "chains") c.chains = detail::size_value(value, w);
    else if (key == "sample_interval") c.sample_interval = detail::size_value(value, w);
    else if (key == "thermalization") c.thermalization = detail::size_value(value, w);
    else if (key == "init_scale") c.init_scale = detail::real_value(value, w);
    else if (key == "exact") {
      if (!value.is_boolean()) detail::fail(w, "expected true or false");
      c.exact = value.get<bool>();
    } else {
      detail::fail(w, "unknown field");
    }
  }
  return c;
}

inline json to_json(const VmcResult& r) {
  json out{{"params", to_json(r.params)}, {"acceptance_rate", r.acceptance_rate}};
  out["final_energy"] = r.energy_trace.empty() ? json(nullptr) : json(r.energy_trace.back());
  out["exact_energy"] = r.exact_energy ? json(*r.exact_energy) : json(nullptr);
  out["overlap"] = r.overlap ? json(*r.overlap) : json(nullptr);
  out["one_minus_overlap"] = r.overlap ? json(1.0 - *r.overlap) : json(nullptr);
  return out;
}

inline void write_energy_trace_csv(const VmcResult& r, std::ostream& out) {
  out << "sweep,energy\n" << std::setprecision(17);
  for (std::size_t s = 0; s < r.energy_trace.size(); ++s) out << s << ',' << r.energy_trace[s] << '\n';
}

/// Weight matrix with hidden units sorted by decreasing max |w|; the first
/// column is the original 1-based hidden index.
inline void write_weight_csv(const RealRbmParams& p, std::ostream& out) {
  out << "hidden";
  for (std::size_t j = 0; j < p.n_visible(); ++j) out << ",v" << j + 1;
  out << '\n' << std::setprecision(17);
  for (std::size_t i : weight_row_order(p)) {
    out << i + 1;
    for (std::size_t j = 0; j < p.n_visible(); ++j) out << ',' << p.weight(i, j);
    out << '\n';
  }
}

}  // namespace cnqs::io

#endif  // CNQS_IO_HPP
