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

#include "cnqs/stabilizer.hpp"

#include <gtest/gtest.h>

#include "cnqs/oracle.hpp"
#include "support/oracles.hpp"

using namespace cnqs;

namespace {

/// Checks U T U^dagger == T' for every generator, sign included.
void expect_conjugated(const CheckMatrix& before, const CheckMatrix& after, const oracle::Matrix& u) {
  for (std::size_t a = 0; a < before.rows(); ++a) {
    const oracle::Matrix want = u * oracle::pauli_matrix(before.row(a)) * u.adjoint();
    const oracle::Matrix got = oracle::pauli_matrix(after.row(a));
    EXPECT_LT((want - got).cwiseAbs().maxCoeff(), 1e-12) << before.row(a).str() << " -> " << after.row(a).str();
  }
}

DenseState graph_state_vector(const Graph& g) {
  return dense_from(
      [&](const SpinConfig& v) {
        int parity = 0;
        for (const auto& e : g.edges()) parity += v.qubit(e.s) * v.qubit(e.t);
        return Complex(parity % 2 ? -1.0 : 1.0);
      },
      g.order());
}

}  // namespace

TEST(PauliString, ParseAndPrint) {
  const auto p = PauliString::parse("-XIYZ");
  EXPECT_EQ(p.phase, 2);
  EXPECT_EQ(p.str(), "-XIYZ");
  EXPECT_EQ(PauliString::parse("ZZ").str(), "+ZZ");
  EXPECT_THROW(PauliString::parse("+XQ"), ParseError);
}

TEST(PauliString, ProductsCarryPhases) {
  EXPECT_EQ((PauliString::parse("X") * PauliString::parse("Y")).str(), "+iZ");
  EXPECT_EQ((PauliString::parse("Y") * PauliString::parse("X")).str(), "-iZ");
  EXPECT_EQ((PauliString::parse("XX") * PauliString::parse("YY")).str(), "-ZZ");
  EXPECT_TRUE(anticommutes(PauliString::parse("XI"), PauliString::parse("ZZ")));
  EXPECT_FALSE(anticommutes(PauliString::parse("XX"), PauliString::parse("ZZ")));
  Rng rng(41);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.below(4);
    std::string sa, sb;
    for (std::size_t j = 0; j < n; ++j) {
      sa += "IXYZ"[rng.below(4)];
      sb += "IXYZ"[rng.below(4)];
    }
    const auto a = PauliString::parse(sa), b = PauliString::parse(sb);
    const oracle::Matrix want = oracle::pauli_matrix(a) * oracle::pauli_matrix(b);
    EXPECT_LT((want - oracle::pauli_matrix(a * b)).cwiseAbs().maxCoeff(), 1e-12) << sa << " * " << sb;
  }
}

TEST(CheckMatrix, GatesMatchDenseConjugation) {
  Rng rng(42);
  const Mat2 s_dag = gates::s_dag();
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.below(6);
    CheckMatrix cm = random_stabilizer(n, rng.bits(), n).tableau;
    for (int step = 0; step < 10; ++step) {
      const CheckMatrix before = cm;
      const std::size_t j = rng.below(n);
      oracle::Matrix u;
      switch (rng.below(n > 1 ? 6 : 5)) {
        case 0: cm.apply_h(j); u = oracle::site_operator(n, j, oracle::to_eigen(gates::h())); break;
        case 1: cm.apply_s(j); u = oracle::site_operator(n, j, oracle::to_eigen(gates::s())); break;
        case 2: cm.apply_s_dag(j); u = oracle::site_operator(n, j, oracle::to_eigen(s_dag)); break;
        case 3: cm.apply_z(j); u = oracle::site_operator(n, j, oracle::pauli('Z')); break;
        case 4: cm.apply_x(j); u = oracle::site_operator(n, j, oracle::pauli('X')); break;
        default: {
          std::size_t k = rng.below(n - 1);
          if (k >= j) ++k;
          cm.apply_cz(j, k);
          u = oracle::cz_matrix(n, j, k);
        }
      }
      expect_conjugated(before, cm, u);
    }
  }
}

TEST(CheckMatrix, RowAddMatchesOperatorProduct) {
  Rng rng(43);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng.below(5);
    CheckMatrix cm = random_stabilizer(n, rng.bits()).tableau;
    const std::size_t a = rng.below(n);
    std::size_t b = rng.below(n - 1);
    if (b >= a) ++b;
    const oracle::Matrix want = oracle::pauli_matrix(cm.row(a)) * oracle::pauli_matrix(cm.row(b));
    cm.row_add(a, b);
    EXPECT_LT((want - oracle::pauli_matrix(cm.row(a))).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_TRUE(cm.is_valid());
  }
}

TEST(CheckMatrix, FreeFunctionsCopy) {
  const CheckMatrix zero(2);
  const CheckMatrix h = apply_h(zero, 0);
  EXPECT_EQ(zero.row(0).str(), "+ZI");
  EXPECT_EQ(h.row(0).str(), "+XI");
  EXPECT_EQ(apply_s(h, 0).row(0).str(), "+YI");
  EXPECT_EQ(apply_cz(h, 0, 1).row(0).str(), "+XZ");
  EXPECT_EQ(row_add(zero, 0, 1).row(0).str(), "+ZZ");
}

TEST(CheckMatrix, Validation) {
  EXPECT_TRUE(CheckMatrix::from_strings({"+XX", "+ZZ"}).is_valid());
  const auto anti = CheckMatrix::from_strings({"+XI", "+ZI"});
  ASSERT_TRUE(anti.violation().has_value());
  EXPECT_NE(anti.violation()->find("anticommute"), std::string::npos);
  const auto dependent = CheckMatrix::from_strings({"+ZZ", "+ZZ"});
  EXPECT_NE(dependent.violation()->find("dependent"), std::string::npos);
  EXPECT_NE(CheckMatrix::from_strings({"+ZZ"}).violation()->find("generators for"), std::string::npos);
  EXPECT_THROW(anti.validate(), ValidationError);
  EXPECT_THROW(CheckMatrix::from_strings({"+XX", "+Z"}), ArgumentError);
}

TEST(CheckMatrix, FromGeneratorsDropsDependentRows) {
  const std::vector<std::string> rows = {"+ZZI", "+IZZ", "+ZIZ", "+XXX"};
  const auto cm = CheckMatrix::from_generators(rows);
  EXPECT_EQ(cm.rows(), 3u);
  EXPECT_TRUE(cm.is_valid());
  const std::vector<std::string> contradiction = {"+ZZI", "+IZZ", "-ZIZ", "+XXX"};
  EXPECT_THROW(CheckMatrix::from_generators(contradiction), ValidationError);
}

TEST(GraphState, ZeroStateGivesEdgelessGraph) {
  for (std::size_t n : {1, 3, 5}) {
    const CheckMatrix zero(n);
    const auto form = to_graph_state(zero);
    EXPECT_EQ(form.graph.edge_count(), 0u);
    EXPECT_EQ(form.hadamard_sites.size(), n);
    const NqsNetwork nqs = stabilizer_to_vmj_nqs(zero);
    EXPECT_EQ(nqs.hidden_count(), 0u);
    EXPECT_LT(proportional_equal(stabilizer_dense_state(zero), dense_from(nqs), 1e-12).deviation, 1e-12);
  }
}

TEST(GraphState, InverseLayerReconstructsTheState) {
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + trial % 8;
    const auto pair = random_stabilizer(n, 1000 + trial);
    const auto form = to_graph_state(pair.tableau);
    EXPECT_TRUE(is_independent_set(form.graph, form.hadamard_sites));
    DenseState psi = graph_state_vector(form.graph);
    for (std::size_t q = 0; q < n; ++q) psi = apply_gate_dense(psi, q, form.inverse_layer.gates[q].matrix);
    EXPECT_LT(proportional_equal(pair.state, psi, 1e-9).deviation, 1e-9) << "trial " << trial;
  }
}

TEST(Pipeline, RandomStatesMatchDenseVectors) {
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + trial % 8;
    const auto pair = random_stabilizer(n, 5000 + trial);
    const auto result = stabilizer_to_vmj(pair.tableau);
    EXPECT_LE(result.nqs.hidden_count(), n > 1 ? n - 1 : 0);
    EXPECT_LT(proportional_equal(pair.state, dense_from(result.nqs), 1e-9).deviation, 1e-9) << "trial " << trial;
  }
}

TEST(Pipeline, DetectsAWrongState) {
  // Negative control: two different random states must not compare equal.
  const auto a = random_stabilizer(5, 1), b = random_stabilizer(5, 2);
  ASSERT_NE(a.tableau, b.tableau);
  EXPECT_FALSE(proportional_equal(a.state, dense_from(stabilizer_to_vmj_nqs(b.tableau)), 1e-9).equal);
}

TEST(Fixtures, Steane) {
  const auto result = stabilizer_to_vmj(steane_state());
  EXPECT_EQ(result.nqs.hidden_count(), 5u);
  EXPECT_EQ(result.form.hadamard_sites, (std::vector<Vertex>{4, 5, 6}));
  for (std::size_t q = 0; q < 3; ++q) EXPECT_EQ(result.form.inverse_layer.gates[q].name, "S†");
  EXPECT_TRUE(result.form.inverse_layer.gates[3].is_identity());
  for (std::size_t q = 4; q < 7; ++q) EXPECT_EQ(result.form.inverse_layer.gates[q].name, "H");
  EXPECT_LT(proportional_equal(stabilizer_dense_state(steane_state()), dense_from(result.nqs), 1e-9).deviation, 1e-9);
}

TEST(Fixtures, FiveQubitAndShorCodes) {
  for (const auto& cm : {five_qubit_code_state(), shor_state()}) {
    const auto result = stabilizer_to_vmj(cm);
    EXPECT_LE(result.nqs.hidden_count(), cm.qubits() - 1);
    EXPECT_LT(proportional_equal(stabilizer_dense_state(cm), dense_from(result.nqs), 1e-9).deviation, 1e-9);
  }
}

TEST(Fixtures, ShorSupport) {
  // Blocks of 000 or 111 with an even number of 111 blocks: four basis states.
  const DenseState s = stabilizer_dense_state(shor_state());
  double top = 0;
  for (const auto& a : s.amplitudes) top = std::max(top, std::abs(a));
  int support = 0;
  for (const auto& a : s.amplitudes) {
    if (std::abs(a) > 1e-9) {
      ++support;
      EXPECT_NEAR(std::abs(a), top, 1e-9);
    }
  }
  EXPECT_EQ(support, 4);
}

TEST(Fixtures, ToricCode) {
  for (std::size_t L : {2, 3}) {
    const CheckMatrix cm = toric_state(L);
    EXPECT_EQ(cm.qubits(), 2 * L * L);
    EXPECT_TRUE(cm.is_valid());
    const DenseState exact = stabilizer_dense_state(cm);
    const NqsNetwork direct = toric_direct_nqs(L);
    EXPECT_EQ(direct.hidden_count(), L * L);
    EXPECT_LT(proportional_equal(exact, dense_from(direct), 1e-9).deviation, 1e-9);
    const NqsNetwork vmj = stabilizer_to_vmj_nqs(cm);
    EXPECT_LE(vmj.hidden_count(), 2 * L * L - 1);
    EXPECT_LT(proportional_equal(exact, dense_from(vmj), 1e-9).deviation, 1e-9);
    RecordProperty("toric_L" + std::to_string(L) + "_M", static_cast<int>(vmj.hidden_count()));
  }
}

TEST(Fixtures, ToricStarsMeetPlaquettesEvenly) {
  const ToricLattice lattice{4};
  for (std::size_t y = 0; y < 4; ++y)
    for (std::size_t x = 0; x < 4; ++x)
      for (std::size_t py = 0; py < 4; ++py)
        for (std::size_t px = 0; px < 4; ++px) {
          int shared = 0;
          for (auto a : lattice.star(x, y))
            for (auto b : lattice.plaquette(px, py)) shared += a == b;
          EXPECT_EQ(shared % 2, 0);
        }
}

TEST(Fixtures, NamesAndErrors) {
  EXPECT_EQ(fixture("steane"), steane_state());
  EXPECT_EQ(fixture("toric:2").qubits(), 8u);
  EXPECT_THROW(fixture("toric:x"), ArgumentError);
  EXPECT_THROW(fixture("golay"), ArgumentError);
  EXPECT_THROW(toric_state(1), ArgumentError);
}
