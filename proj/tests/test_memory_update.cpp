// Copyright 2026 The paradox-lab Authors
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

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "paradox/gpt/polytope.hpp"
#include "paradox/memory/memory_update.hpp"

namespace {

using namespace paradox;
using namespace paradox::gpt;
using namespace paradox::memory;

/// System plus fresh memory after the update, flat over (X, X', a, a').
StateVector updated_gbit_oracle(const StateVector& in, bool swap_flip) {
  std::vector<Rational> e(16);
  for (int x = 0; x < 2; ++x)
    for (int xm = 0; xm < 2; ++xm)
      for (int a = 0; a < 2; ++a) {
        int am = a ^ ((swap_flip && x != xm) ? 1 : 0);
        e[(2 * x + xm) * 4 + 2 * a + am] = in[2 * x + a];
      }
  return StateVector(SystemSignature::gbits(2), e);
}

/// Corrupts the setting block `block` of a gbit update: CN replaced by the
/// identity.
MemoryUpdateMap corrupt_block(const MemoryUpdateMap& good, std::size_t block) {
  const auto& m = good.base.branches().front().matrix;
  SparseMatrix bad(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    if (r / 4 == block) {
      bad.set(r, r, 1);
      continue;
    }
    for (const auto& [c, v] : m.row(r)) bad.set(r, c, v);
  }
  MemoryUpdateMap out = good;
  out.base = Transformation(good.base.input_signature(), good.base.output_signature(), {{"update", bad}});
  return out;
}

std::vector<std::pair<Rational, Rational>> fifty_random_parameters() {
  oracle::RationalSource src(2026);
  std::vector<std::pair<Rational, Rational>> out;
  for (int i = 0; i < 50; ++i) out.emplace_back(src.next(), src.next());
  return out;
}

TEST(MemoryUpdate, CopyPolicyMatchesExplicitFinalState) {
  auto map = build_memory_update();
  oracle::RationalSource src(1);
  for (int i = 0; i < 10; ++i) {
    auto in = make_gbit(src.next(), src.next());
    auto out = apply_update(map, in, 0);
    EXPECT_EQ(out.signature(), SystemSignature{Subsystem(4, 4)});
    EXPECT_EQ(out.reinterpret(map.layout.unmerged()), updated_gbit_oracle(in, false));
  }
  // The displayed final state for p = 1/3, q = 3/4.
  auto shown = apply_update(map, make_gbit(Rational(1, 3), Rational(3, 4)), 0);
  std::vector<Rational> want{Rational(1, 3), 0, 0, Rational(2, 3), Rational(1, 3), 0, 0, Rational(2, 3),
                             Rational(3, 4), 0, 0, Rational(1, 4), Rational(3, 4), 0, 0, Rational(1, 4)};
  EXPECT_EQ(shown.entries(), want);
}

TEST(MemoryUpdate, SwapFlipPolicyAntiCopiesUnmatchedBlocks) {
  auto map = build_memory_update({kGbit, {}, StarredPolicy::kSwapFlip});
  auto in = make_gbit(Rational(2, 7), Rational(5, 9));
  EXPECT_EQ(apply_update(map, in, 0).reinterpret(map.layout.unmerged()), updated_gbit_oracle(in, true));
  EXPECT_TRUE(validate_operation(map.base, enumerate_ns_vertices(SystemSignature::gbits(2))).ok);
  EXPECT_TRUE(check_information_preserving(map).ok);
}

TEST(MemoryUpdate, PreservesDimension) {
  auto map = build_memory_update();
  EXPECT_EQ(map.base.input_signature().dimension(), map.base.output_signature().dimension());
}

TEST(MemoryUpdate, MatchedBlocksAreDiagonal) {
  auto map = build_memory_update();
  for (const auto& v : enumerate_ns_vertices(SystemSignature::gbits(1))) {
    auto out = apply_update(map, v, 0);
    for (std::size_t x = 0; x < 2; ++x)
      for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t am = 0; am < 2; ++am)
          if (a != am) EXPECT_TRUE(out.at({map.layout.matched_setting(x)}, {a * 2 + am}).is_zero());
  }
}

TEST(MemoryUpdate, OutputIsNotProductForMixedInput) {
  auto map = build_memory_update();
  auto out = apply_update(map, make_gbit(Rational(1, 3), Rational(1, 2)), 0).reinterpret(map.layout.unmerged());
  auto product = tensor(marginal(out, {0}, {0}), raw_marginal(out, {1}, {0}));
  EXPECT_NE(out, product);
}

TEST(MemoryUpdate, IsAValidOperationOnEveryTwoGbitVertex) {
  auto map = build_memory_update();
  auto rep = validate_operation(map.base, enumerate_ns_vertices(SystemSignature::gbits(2)));
  EXPECT_TRUE(rep.ok) << (rep.violation ? rep.violation->detail : "");
}

TEST(MemoryUpdate, FixedSettingCircuitAgreesOnFreshMemory) {
  auto map = build_memory_update();
  auto circuit = fixed_setting_memory_circuit();
  EXPECT_TRUE(validate_operation(circuit, enumerate_ns_vertices(SystemSignature::gbits(2))).ok);
  for (const auto& [p, q] : fifty_random_parameters()) {
    auto in = make_gbit(p, q);
    auto via_circuit = apply_deterministic(circuit, tensor(in, map.memory_state()));
    EXPECT_EQ(via_circuit, apply_update(map, in, 0));
  }
}

TEST(MemoryUpdate, NonDefaultMemoryStartIsCorrected) {
  auto map = build_memory_update({kGbit, PureGbit{1, 0}, StarredPolicy::kCopy});
  auto in = make_gbit(Rational(3, 8), Rational(1, 6));
  auto out = apply_update(map, in, 0);
  EXPECT_EQ(compress(out, map.layout).compressed, in);
  EXPECT_TRUE(check_information_preserving(map).ok);
}

TEST(MemoryUpdate, WrongSubsystemIsStructuralError) {
  auto map = build_memory_update();
  EXPECT_THROW(apply_update(map, make_uniform(SystemSignature{Subsystem{3, 2}}), 0), StructuralError);
  EXPECT_THROW(apply_update(map, make_pr_box(), 2), StructuralError);
}

TEST(Compress, ReproducesRandomGbitsExactly) {
  auto map = build_memory_update();
  for (const auto& [p, q] : fifty_random_parameters()) {
    auto in = make_gbit(p, q);
    EXPECT_EQ(compress(apply_update(map, in, 0), map.layout).compressed, in) << p << "," << q;
  }
  for (int f = 0; f < 4; ++f) {
    auto pure = oracle::one_gbit([&](int a, int x) { return Rational(a == ((f >> x) & 1) ? 1 : 0); });
    EXPECT_EQ(compress(apply_update(map, pure, 0), map.layout).compressed, pure);
  }
}

TEST(Compress, AcceptsTheUnmergedForm) {
  auto map = build_memory_update();
  auto in = make_gbit(Rational(1, 4), Rational(2, 3));
  auto out = apply_update(map, in, 0).reinterpret(map.layout.unmerged());
  auto view = compress(out, map.layout);
  EXPECT_EQ(view.compressed, in);
  EXPECT_EQ(view.parent_setting(1), 3u);
  EXPECT_EQ(view.parent_outcome(1), 3u);
}

TEST(Compress, RejectsOffDiagonalMatchedWeight) {
  auto bad = make_uniform(SystemSignature{Subsystem{4, 4}});
  EXPECT_THROW(compress(bad), DomainError);
  try {
    compress(bad);
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("not a measurement-updated state"), std::string::npos);
  }
}

TEST(Compress, UrsulaReadoutEqualsCompression) {
  auto map = build_memory_update();
  auto readout = ursula_readout();
  for (const auto& [p, q] : fifty_random_parameters()) {
    auto glued = apply_update(map, make_gbit(p, q), 0);
    EXPECT_EQ(apply_deterministic(readout, glued), compress(glued, map.layout).compressed);
  }
}

TEST(Compress, HigherDimensionalSystemsRoundTrip) {
  for (Subsystem sys : {Subsystem{3, 2}, Subsystem{2, 3}, Subsystem{3, 3}, Subsystem{2, 4}}) {
    auto map = build_memory_update({sys, {}, StarredPolicy::kCopy});
    SystemSignature sig{sys};
    std::vector<StateVector> inputs{make_uniform(sig)};
    // Deterministic answer x mod k at setting x.
    std::vector<Rational> e(sig.dimension());
    for (std::size_t x = 0; x < sys.settings; ++x) e[x * sys.outcomes + x % sys.outcomes] = 1;
    inputs.emplace_back(sig, e);
    for (const auto& in : inputs) {
      auto out = apply_update(map, in, 0);
      EXPECT_EQ(compress(out, map.layout).compressed, in) << sys.str();
    }
  }
}

TEST(InformationPreservation, AllRelabelingsOnAllVertices) {
  auto rep = check_information_preserving(build_memory_update());
  EXPECT_TRUE(rep.ok);
  EXPECT_FALSE(rep.counterexample.has_value());
}

TEST(InformationPreservation, LiftedRelabelingsMatchOracle) {
  // Independent of the checker: flip the outcome at X=0 by hand and compare
  // the lifted result with the hand-flipped input.
  auto map = build_memory_update();
  auto flip = compile_wiring(Wiring{gbit_relabeling(2)}, SystemSignature{kGbit});
  for (const auto& v : enumerate_ns_vertices(SystemSignature{kGbit})) {
    auto stored = apply_update(map, v, 0);
    auto lifted = apply_update(map, apply_deterministic(flip, compress(stored, map.layout).compressed), 0);
    auto want = oracle::one_gbit([&](int a, int x) { return v[2 * x + (x == 0 ? 1 - a : a)]; });
    EXPECT_EQ(compress(lifted, map.layout).compressed, want);
  }
}

TEST(InformationPreservation, CorruptedBlockYieldsCounterexample) {
  auto good = build_memory_update();
  for (std::size_t block : {0u, 3u}) {
    auto rep = check_information_preserving(corrupt_block(good, block));
    ASSERT_FALSE(rep.ok) << "block " << block;
    ASSERT_TRUE(rep.counterexample.has_value());
    EXPECT_FALSE(rep.counterexample->detail.empty());
  }
}

TEST(BipartitePreservation, AfterBobMatchesOracle) {
  auto pr = make_pr_box();
  auto rep = bipartite_preservation_check(pr);
  std::vector<Rational> want(pr.signature().dimension() * 4);
  SystemSignature sig{kGbit, Subsystem{4, 4}};
  ASSERT_EQ(rep.after_bob.signature(), sig);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int ym = 0; ym < 2; ++ym)
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b) want[(x * 4 + y * 2 + ym) * 8 + a * 4 + b * 2 + b] = pr[(2 * x + y) * 4 + 2 * a + b];
  EXPECT_EQ(rep.after_bob.entries(), want);
}

TEST(BipartitePreservation, EveryVertexAndThePrBox) {
  for (const auto& v : enumerate_ns_vertices(SystemSignature::gbits(2))) {
    auto rep = bipartite_preservation_check(v);
    EXPECT_TRUE(rep.ok);
    EXPECT_EQ(rep.effective, v);
  }
  auto pr = bipartite_preservation_check(make_pr_box());
  EXPECT_TRUE(pr.ok);
  EXPECT_EQ(oracle::chsh(pr.effective), Rational(4));
}

TEST(BipartitePreservation, HundredRandomPolytopePoints) {
  auto v = enumerate_ns_vertices(SystemSignature::gbits(2));
  oracle::RationalSource src(99);
  for (int i = 0; i < 100; ++i) {
    std::vector<Rational> e(16);
    Rational rest(1);
    for (int k = 0; k < 3; ++k) {
      Rational w = rest * src.next(9);
      const auto& pick = v[(i * 7 + k * 5) % v.size()];
      for (std::size_t j = 0; j < 16; ++j) e[j] += w * pick[j];
      rest -= w;
    }
    for (std::size_t j = 0; j < 16; ++j) e[j] += rest * v[(i * 3 + 1) % v.size()][j];
    StateVector point(SystemSignature::gbits(2), e);
    ASSERT_TRUE(convex_weights(v, point).has_value());
    EXPECT_TRUE(bipartite_preservation_check(point).ok);
  }
}

TEST(Superglue, DeterministicInputSignalsAcrossSystemAndMemory) {
  auto map = build_memory_update();
  auto out = apply_update(map, make_gbit(1, 0), 0).reinterpret(map.layout.unmerged());
  // Memory marginal at X=0 is (p,1-p|p,1-p), at X=1 it is (q,1-q|q,1-q).
  EXPECT_EQ(raw_marginal(out, {1}, {0}), make_gbit(1, 1));
  EXPECT_EQ(raw_marginal(out, {1}, {1}), make_gbit(0, 0));
  auto rep = detect_superglue(out, 1);
  ASSERT_TRUE(rep.superglued);
  ASSERT_TRUE(rep.witness.has_value());
  EXPECT_NE(rep.witness->marginal_a, rep.witness->marginal_b);
}

TEST(Superglue, GeneralMarginalsFollowTheDisplayedForm) {
  auto map = build_memory_update();
  for (const auto& [p, q] : fifty_random_parameters()) {
    auto out = apply_update(map, make_gbit(p, q), 0).reinterpret(map.layout.unmerged());
    EXPECT_EQ(raw_marginal(out, {1}, {0}), make_gbit(p, p));
    EXPECT_EQ(raw_marginal(out, {1}, {1}), make_gbit(q, q));
    EXPECT_EQ(detect_superglue(out, 1).superglued, p != q);
  }
}

TEST(Superglue, UnbiasedInputStaysNonSignalling) {
  auto map = build_memory_update();
  auto out = apply_update(map, make_gbit(Rational(1, 2), Rational(1, 2)), 0).reinterpret(map.layout.unmerged());
  EXPECT_FALSE(detect_superglue(out, 1).superglued);
}

TEST(Superglue, ProductStatesAreNeverFlagged) {
  oracle::RationalSource src(4);
  for (int i = 0; i < 10; ++i) {
    auto s = tensor(make_gbit(src.next(), src.next()), make_gbit(src.next(), src.next()));
    EXPECT_FALSE(detect_superglue(s, 1).superglued);
    EXPECT_FALSE(detect_superglue(s, SystemSignature::gbits(2)).superglued);
  }
}

TEST(UpdateBlocks, FormatShowsEveryBlock) {
  auto text = format_update_blocks(build_memory_update());
  for (const char* b : {"block X=0 X'=0", "block X=0 X'=1", "block X=1 X'=0", "block X=1 X'=1"})
    EXPECT_NE(text.find(b), std::string::npos) << b;
}

}  // namespace
