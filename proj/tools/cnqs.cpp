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

// cnqs: build, convert and verify compact neural-network quantum states.
//
// Exit codes: 0 success, 1 verification failed, 2 input error,
// 3 capability limit.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cnqs/graph.hpp"
#include "cnqs/io.hpp"
#include "cnqs/jastrow.hpp"
#include "cnqs/nqs.hpp"
#include "cnqs/oracle.hpp"
#include "cnqs/stabilizer.hpp"
#include "cnqs/vmc.hpp"

namespace {

using cnqs::io::json;

constexpr int kOk = 0;
constexpr int kVerifyFailed = 1;
constexpr int kInputError = 2;
constexpr int kCapability = 3;

std::string join_labels(const std::vector<std::size_t>& v) {
  std::ostringstream out;
  for (std::size_t k = 0; k < v.size(); ++k) out << (k ? " " : "") << v[k] + 1;
  return out.str();
}

/// "1,3,4" -> {0, 2, 3}.
cnqs::OrderedVertexCover parse_cover(const std::string& text, std::size_t n) {
  cnqs::OrderedVertexCover cover;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size() || v < 1 || v > n) {
      throw cnqs::ArgumentError("--cover: bad vertex \"" + item + "\" (expected 1.." + std::to_string(n) + ")");
    }
    cover.vertices.push_back(v - 1);
  }
  return cover;
}

std::vector<double> parse_list(const std::string& text, const char* flag) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    double x = 0;
    try {
      x = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw cnqs::ArgumentError(std::string(flag) + ": bad value \"" + item + "\"");
    out.push_back(x);
  }
  if (out.empty()) throw cnqs::ArgumentError(std::string(flag) + ": empty list");
  return out;
}

void print_nqs_summary(const cnqs::NqsNetwork& nqs, std::ostream& out) {
  out << "visible units (N): " << nqs.n_visible() << "\n";
  out << "hidden units (M): " << nqs.hidden_count() << "\n";
  out << "valencies:";
  for (std::size_t j = 0; j < nqs.n_visible(); ++j) out << " " << cnqs::valency(nqs, j);
  out << "\n";
  out << "univalent sites: " << join_labels(cnqs::univalent_sites(nqs)) << "\n";
}

/// JSON to --out, or to stdout when no file is given (summary then goes to stderr).
std::ostream& emit(const json& j, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << j.dump(2) << "\n";
    return std::cerr;
  }
  cnqs::io::write_file(out_path, j.dump(2) + "\n");
  return std::cout;
}

int report_comparison(const cnqs::Comparison& c, double tol, std::ostream& out) {
  out << std::setprecision(3) << "max deviation: " << c.deviation << " (tol " << tol << ")";
  if (!c.equal) out << " at basis index " << c.worst_index;
  out << "\n" << (c.equal ? "verified" : "verification FAILED") << "\n";
  return c.equal ? kOk : kVerifyFailed;
}

// ---------------------------------------------------------------------------

struct BuildArgs {
  std::string kind = "graph2nqs";
  std::string input;
  std::optional<double> soften;
  std::string cover;
  std::string solution = "asymmetric";
  std::string out;
  bool verify = false;
  double tol = 1e-10;
};

int cmd_build(const BuildArgs& a) {
  const json doc = cnqs::io::read_json_file(a.input);
  const cnqs::JastrowState state = cnqs::io::jastrow_from_json(doc);
  const std::size_t n = state.size();
  std::map<std::size_t, cnqs::Mat2> gates;
  if (doc.contains("gates")) {
    const json& list = doc["gates"];
    if (!list.is_array()) throw cnqs::ParseError(a.input + ": /gates: expected an array");
    for (std::size_t k = 0; k < list.size(); ++k) {
      const std::string where = "/gates/" + std::to_string(k);
      if (!list[k].is_object() || !list[k].contains("site") || !list[k].contains("matrix")) {
        throw cnqs::ParseError(a.input + ": " + where + ": expected {\"site\": s, \"matrix\": [[..],[..]]}");
      }
      const std::size_t site = cnqs::io::detail::label(list[k]["site"], n, where + "/site");
      gates[site] = cnqs::io::mat2_from_json(list[k]["matrix"], where + "/matrix");
    }
  }
  if (!gates.empty() && a.kind != "vmj") throw cnqs::ArgumentError("gates are only used with --kind vmj");
  if (a.soften && a.kind != "extensive") throw cnqs::ArgumentError("--soften applies to --kind extensive");

  cnqs::NqsNetwork nqs;
  if (a.kind == "sparse") {
    nqs = cnqs::sparse_nqs(state, a.solution == "matrix_sqrt" ? cnqs::SparseSolution::matrix_sqrt
                                                              : cnqs::SparseSolution::asymmetric);
  } else if (a.kind == "extensive") {
    nqs = cnqs::extensive_nqs(state, a.soften ? cnqs::ExtensiveMode::softened(*a.soften) : cnqs::ExtensiveMode::exact());
  } else if (a.kind == "graph2nqs" || a.kind == "vmj") {
    cnqs::OrderedVertexCover cover;
    if (!a.cover.empty()) {
      cover = parse_cover(a.cover, n);
    } else if (a.kind == "vmj") {
      cover = cnqs::max_univalency_cover(state.graph()).cover;
    } else {
      cover = cnqs::best_effort_vertex_cover(state.graph());
    }
    nqs = cnqs::vmj_nqs(cnqs::VmjState{state, gates, cover});
  }

  std::ostream& info = emit(cnqs::io::to_json(nqs), a.out);
  info << "construction: " << a.kind << "\n";
  print_nqs_summary(nqs, info);
  if (!a.verify) return kOk;
  cnqs::DenseState reference = cnqs::dense_from(state);
  for (const auto& [site, q] : gates) reference = cnqs::apply_gate_dense(reference, site, q);
  return report_comparison(cnqs::proportional_equal(reference, cnqs::dense_from(nqs), a.tol), a.tol, info);
}

// ---------------------------------------------------------------------------

bool is_fixture_name(const std::string& s) {
  return s == "steane" || s == "513" || s == "shor" || s.starts_with("toric:");
}

cnqs::CheckMatrix load_tableau(const std::string& source) {
  if (is_fixture_name(source)) return cnqs::fixture(source);
  if (!std::filesystem::exists(source)) {
    throw cnqs::ArgumentError("no tableau file or fixture named \"" + source +
                              "\" (fixtures: steane, 513, shor, toric:L)");
  }
  return cnqs::io::read_tableau_file(source);
}

struct Stab2NqsArgs {
  std::string source;
  std::string out;
  bool verify = false;
  double tol = 1e-9;
  std::uint64_t seed = 12345;
};

int cmd_stab2nqs(const Stab2NqsArgs& a) {
  const cnqs::CheckMatrix cm = load_tableau(a.source);
  if (auto why = cm.violation()) throw cnqs::ValidationError("invalid stabilizer tableau: " + *why);
  const cnqs::StabilizerNqs result = cnqs::stabilizer_to_vmj(cm);
  const auto& form = result.form;
  const std::size_t n = cm.qubits();

  std::ostream& info = emit(cnqs::io::to_json(result.nqs), a.out);
  info << "qubits: " << n << "\n";
  info << "hidden units (M): " << result.nqs.hidden_count() << "\n";
  info << "X-block rank: " << form.x_rank << "\n";
  info << "Hadamard sites (I_H): " << join_labels(form.hadamard_sites) << "\n";
  info << "gate layer:";
  for (std::size_t q = 0; q < n; ++q) {
    const auto& g = form.inverse_layer.gates[q];
    if (!g.is_identity()) info << " " << q + 1 << ":" << g.name;
  }
  info << "\n";
  info << "cover order: " << join_labels(result.cover.vertices) << "\n";
  info << "graph adjacency:\n";
  for (std::size_t v = 0; v < n; ++v) info << "  " << v + 1 << ": " << join_labels(cnqs::neighborhood(form.graph, v)) << "\n";
  const auto components = cnqs::connected_components(form.graph);
  info << "components:";
  for (const auto& c : components) info << " {" << join_labels(c) << "}";
  info << "\n";
  if (!a.verify) return kOk;
  return report_comparison(
      cnqs::proportional_equal(cnqs::stabilizer_dense_state(cm, a.seed), cnqs::dense_from(result.nqs), a.tol), a.tol,
      info);
}

// ---------------------------------------------------------------------------

struct VerifyArgs {
  std::string nqs_file;
  std::string jastrow;
  std::string tableau;
  std::string other_nqs;
  std::string evaluator;
  double tol = 1e-10;
  std::uint64_t seed = 12345;
};

int cmd_verify(const VerifyArgs& a) {
  const cnqs::NqsNetwork nqs = cnqs::io::nqs_from_json(cnqs::io::read_json_file(a.nqs_file));
  const std::size_t n = nqs.n_visible();
  cnqs::check_dense_size(n);
  const int given = !a.jastrow.empty() + !a.tableau.empty() + !a.other_nqs.empty() + !a.evaluator.empty();
  if (given != 1) throw cnqs::ArgumentError("give exactly one of --jastrow, --tableau, --nqs, --evaluator");

  cnqs::DenseState reference;
  bool sector_only = false;
  if (!a.jastrow.empty()) {
    reference = cnqs::dense_from(cnqs::io::jastrow_from_json(cnqs::io::read_json_file(a.jastrow)));
  } else if (!a.tableau.empty()) {
    reference = cnqs::stabilizer_dense_state(load_tableau(a.tableau), a.seed);
  } else if (!a.other_nqs.empty()) {
    reference = cnqs::dense_from(cnqs::io::nqs_from_json(cnqs::io::read_json_file(a.other_nqs)));
  } else {
    // cft:ALPHA or xxz:DELTA, both on the zero-magnetisation sector.
    const auto colon = a.evaluator.find(':');
    const std::string tag = a.evaluator.substr(0, colon);
    const double value = colon == std::string::npos ? 0.0 : parse_list(a.evaluator.substr(colon + 1), "--evaluator")[0];
    if (tag == "cft") {
      reference = cnqs::dense_from(cnqs::CftState(n, value));
    } else if (tag == "xxz") {
      reference = cnqs::xxz_ground_state(n, value, false).state;
    } else {
      throw cnqs::ArgumentError("--evaluator: expected cft:ALPHA or xxz:DELTA");
    }
    sector_only = true;
  }
  if (reference.n != n) throw cnqs::ArgumentError("reference has " + std::to_string(reference.n) + " sites, network has " + std::to_string(n));
  cnqs::DenseState candidate = cnqs::dense_from(nqs);
  if (sector_only) {
    for (std::size_t i = 0; i < candidate.dimension(); ++i)
      if (cnqs::SpinConfig::from_index(i, n).magnetization() != 0) candidate[i] = 0;
  }
  return report_comparison(cnqs::proportional_equal(reference, candidate, a.tol), a.tol, std::cout);
}

// ---------------------------------------------------------------------------

struct SweepArgs {
  std::string sizes = "6,8,10";
  std::string softenings = "1,2,3,4,5,6";
  double alpha = 0.25;
  std::string out;
};

int cmd_soften_sweep(const SweepArgs& a) {
  std::vector<std::size_t> sizes;
  for (double x : parse_list(a.sizes, "--n")) {
    if (x < 2 || x > 14 || std::floor(x) != x || static_cast<long>(x) % 2 != 0) {
      throw cnqs::ArgumentError("--n: sizes must be even integers in [2, 14]");
    }
    sizes.push_back(static_cast<std::size_t>(x));
  }
  const auto softenings = parse_list(a.softenings, "--S");
  std::ostringstream csv;
  csv << "S";
  for (std::size_t n : sizes) csv << ",n" << n;
  csv << "\n" << std::setprecision(10);
  for (double s : softenings) {
    csv << s;
    for (std::size_t n : sizes) csv << "," << cnqs::cft_softening_infidelity(n, a.alpha, s);
    csv << "\n";
  }
  if (a.out.empty()) {
    std::cout << csv.str();
  } else {
    cnqs::io::write_file(a.out, csv.str());
  }
  return kOk;
}

// ---------------------------------------------------------------------------

struct VmcArgs {
  std::string config_file;
  std::optional<std::size_t> n, m, sweeps, samples, chains;
  std::optional<double> delta, lr, shift, p_cap;
  std::optional<std::uint64_t> seed;
  bool exact = false;
  bool m_sweep = false;
  bool quiet = false;
  std::string out = "vmc";
};

void write_vmc_outputs(const cnqs::VmcConfig& cfg, const cnqs::VmcResult& r, const std::string& prefix) {
  std::ostringstream trace, weights;
  cnqs::io::write_energy_trace_csv(r, trace);
  cnqs::io::write_weight_csv(r.params, weights);
  cnqs::io::write_file(prefix + "_trace.csv", trace.str());
  cnqs::io::write_file(prefix + "_weights.csv", weights.str());
  json result = cnqs::io::to_json(r);
  result["config"] = cnqs::io::to_json(cfg);
  cnqs::io::write_file(prefix + "_result.json", result.dump(2) + "\n");
}

int cmd_vmc(const VmcArgs& a) {
  cnqs::VmcConfig cfg;
  if (!a.config_file.empty()) cfg = cnqs::io::vmc_config_from_json(cnqs::io::read_json_file(a.config_file));
  if (a.n) cfg.n = *a.n;
  if (a.m) cfg.m = *a.m;
  if (a.sweeps) cfg.sweeps = *a.sweeps;
  if (a.samples) cfg.samples_per_sweep = *a.samples;
  if (a.chains) cfg.chains = *a.chains;
  if (a.delta) cfg.delta = *a.delta;
  if (a.lr) cfg.learning_rate = *a.lr;
  if (a.shift) cfg.sr_shift = *a.shift;
  if (a.p_cap) cfg.p_cap = *a.p_cap;
  if (a.seed) cfg.seed = *a.seed;
  if (a.exact) cfg.exact = true;
  cfg.validate();

  auto progress = [&](std::size_t sweep, double energy) {
    if (!a.quiet && (sweep % 50 == 0)) std::cerr << "sweep " << sweep << "  E = " << std::setprecision(10) << energy << "\n";
  };

  if (!a.m_sweep) {
    const auto r = cnqs::run_vmc(cfg, progress);
    write_vmc_outputs(cfg, r, a.out);
    std::cout << std::setprecision(10) << "final energy: " << r.energy_trace.back() << "\n";
    if (r.exact_energy) std::cout << "exact energy: " << *r.exact_energy << "\n";
    if (r.overlap) std::cout << std::setprecision(4) << "1 - overlap: " << 1.0 - *r.overlap << "\n";
    std::cout << std::setprecision(4) << "acceptance rate: " << r.acceptance_rate << "\n";
    return kOk;
  }

  // 1 - O against the number of hidden units, M = 1..n.
  std::ostringstream csv;
  csv << "m,one_minus_overlap,final_energy,exact_energy\n" << std::setprecision(12);
  for (std::size_t m = 1; m <= cfg.n; ++m) {
    cnqs::VmcConfig c = cfg;
    c.m = m;
    const auto r = cnqs::run_vmc(c, progress);
    write_vmc_outputs(c, r, a.out + "_m" + std::to_string(m));
    csv << m << "," << (r.overlap ? 1.0 - *r.overlap : NAN) << "," << r.energy_trace.back() << ","
        << (r.exact_energy ? *r.exact_energy : NAN) << "\n";
    std::cout << "m = " << m << "  1 - overlap = " << std::setprecision(4) << (r.overlap ? 1.0 - *r.overlap : NAN) << "\n";
  }
  cnqs::io::write_file(a.out + "_msweep.csv", csv.str());
  return kOk;
}

// ---------------------------------------------------------------------------

struct DenseArgs {
  std::string nqs_file;
  std::string out;
  std::string csv;
};

int cmd_dense(const DenseArgs& a) {
  const cnqs::NqsNetwork nqs = cnqs::io::nqs_from_json(cnqs::io::read_json_file(a.nqs_file));
  const cnqs::DenseState s = cnqs::dense_from(nqs);
  if (a.out.empty() && a.csv.empty()) throw cnqs::ArgumentError("give --out and/or --csv");
  if (!a.out.empty()) cnqs::io::export_dense(s, a.out);
  if (!a.csv.empty()) {
    std::ostringstream csv;
    cnqs::io::write_dense_csv(s, csv);
    cnqs::io::write_file(a.csv, csv.str());
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compact neural-network quantum states: constructions, conversions and checks"};
  app.require_subcommand(1);

  BuildArgs build;
  auto* b = app.add_subcommand("build", "Build an NQS network from a Jastrow state file");
  b->add_option("input", build.input, "Jastrow state JSON")->required();
  b->add_option("--kind", build.kind, "sparse, extensive, graph2nqs or vmj")
      ->check(CLI::IsMember({"sparse", "extensive", "graph2nqs", "vmj"}))
      ->capture_default_str();
  b->add_option("--soften", build.soften, "Softening S for the extensive construction");
  b->add_option("--cover", build.cover, "Ordered vertex cover, e.g. 2,5,4");
  b->add_option("--solution", build.solution, "Sparse weights: asymmetric or matrix_sqrt")
      ->check(CLI::IsMember({"asymmetric", "matrix_sqrt"}))
      ->capture_default_str();
  b->add_option("--out", build.out, "Output NQS JSON (default: stdout)");
  b->add_flag("--verify", build.verify, "Compare against the dense Jastrow state");
  b->add_option("--tol", build.tol, "Verification tolerance")->capture_default_str();

  Stab2NqsArgs stab;
  auto* s = app.add_subcommand("stab2nqs", "Convert a stabilizer state to a VMJ NQS");
  s->add_option("source", stab.source, "Tableau file (text or .json) or fixture: steane, 513, shor, toric:L")->required();
  s->add_option("--out", stab.out, "Output NQS JSON (default: stdout)");
  s->add_flag("--verify", stab.verify, "Compare against the dense stabilizer state");
  s->add_option("--tol", stab.tol, "Verification tolerance")->capture_default_str();
  s->add_option("--seed", stab.seed, "Seed of the dense projection")->capture_default_str();

  VerifyArgs verify;
  auto* v = app.add_subcommand("verify", "Compare an NQS network with a reference state");
  v->add_option("network", verify.nqs_file, "NQS JSON")->required();
  v->add_option("--jastrow", verify.jastrow, "Reference Jastrow state JSON");
  v->add_option("--tableau", verify.tableau, "Reference tableau file or fixture name");
  v->add_option("--nqs", verify.other_nqs, "Reference NQS JSON");
  v->add_option("--evaluator", verify.evaluator, "cft:ALPHA or xxz:DELTA (zero-magnetisation sector)");
  v->add_option("--tol", verify.tol, "Maximum relative deviation")->capture_default_str();
  v->add_option("--seed", verify.seed, "Seed of the dense stabilizer projection")->capture_default_str();

  SweepArgs sweep;
  auto* w = app.add_subcommand("soften-sweep", "1 - overlap of softened extensive CFT networks");
  w->add_option("--n", sweep.sizes, "Chain lengths, comma separated")->capture_default_str();
  w->add_option("--S,--soften", sweep.softenings, "Softening values, comma separated")->capture_default_str();
  w->add_option("--alpha", sweep.alpha, "CFT exponent")->capture_default_str();
  w->add_option("--out", sweep.out, "Output CSV (default: stdout)");

  VmcArgs vmc;
  auto* m = app.add_subcommand("vmc", "Variational Monte Carlo for the XXZ chain");
  m->add_option("config", vmc.config_file, "Run configuration JSON");
  m->add_option("--n", vmc.n, "Chain length");
  m->add_option("--m", vmc.m, "Hidden units");
  m->add_option("--delta", vmc.delta, "Anisotropy");
  m->add_option("--sweeps", vmc.sweeps, "SR steps");
  m->add_option("--samples", vmc.samples, "Samples per sweep and chain");
  m->add_option("--chains", vmc.chains, "Markov chains");
  m->add_option("--lr", vmc.lr, "Learning rate");
  m->add_option("--shift", vmc.shift, "SR diagonal shift");
  m->add_option("--p-cap", vmc.p_cap, "Parameter clip bound");
  m->add_option("--seed", vmc.seed, "Random seed");
  m->add_flag("--exact", vmc.exact, "Sum over the whole sector instead of sampling");
  m->add_flag("--m-sweep", vmc.m_sweep, "Repeat for M = 1..n and write <out>_msweep.csv");
  m->add_flag("--quiet", vmc.quiet, "No progress output");
  m->add_option("--out", vmc.out, "Output prefix")->capture_default_str();

  DenseArgs dense;
  auto* d = app.add_subcommand("dense", "Export the dense amplitude vector of an NQS network");
  d->add_option("network", dense.nqs_file, "NQS JSON")->required();
  d->add_option("--out", dense.out, "Base name for <out>.bin and <out>.json");
  d->add_option("--csv", dense.csv, "CSV file (index, re, im)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (b->parsed()) return cmd_build(build);
    if (s->parsed()) return cmd_stab2nqs(stab);
    if (v->parsed()) return cmd_verify(verify);
    if (w->parsed()) return cmd_soften_sweep(sweep);
    if (m->parsed()) return cmd_vmc(vmc);
    if (d->parsed()) return cmd_dense(dense);
  } catch (const cnqs::CapabilityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kCapability;
  } catch (const cnqs::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
