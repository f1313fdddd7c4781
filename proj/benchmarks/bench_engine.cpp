// Copyright 2026 The CHF Advisor Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <random>

#include "chf/abduction.hpp"
#include "chf/kb.hpp"
#include "chf/parser.hpp"
#include "support/patients.hpp"
#include "support/random_programs.hpp"

using namespace chf;

namespace {

const Program& shipped_kb() {
  static const Program p = kb::load_kb({CHF_KB_DIR});
  return p;
}

void BM_LoadKb(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(kb::load_kb({CHF_KB_DIR}));
}
BENCHMARK(BM_LoadKb);

void BM_GroundKbWithReferencePatient(benchmark::State& state) {
  Program p = shipped_kb();
  for (auto& f : kb::patient_to_facts(testing::reference_record())) p.rules.push_back(f);
  for (auto _ : state) benchmark::DoNotOptimize(ground_program(p));
}
BENCHMARK(BM_GroundKbWithReferencePatient);

void BM_RecommendReferencePatient(benchmark::State& state) {
  kb::PatientRecord r = testing::reference_record();
  for (auto _ : state) {
    benchmark::DoNotOptimize(kb::recommend(r, shipped_kb(), static_cast<std::size_t>(state.range(0))));
  }
}
BENCHMARK(BM_RecommendReferencePatient)->Arg(1)->Arg(10)->Arg(50);

void BM_AbduceHydralazine(benchmark::State& state) {
  Program p = shipped_kb();
  p.append(parse_program(testing::read_text(std::string(CHF_SAMPLES_DIR) + "/hydralazine_candidate_facts.lp")));
  for (const auto& s : kb::default_abducibles()) p.add_abducible(s);
  Query q = parse_query("recommendation(hydralazine_and_isosorbide_dinitrate, class_1).");
  for (auto _ : state) benchmark::DoNotOptimize(abduce(p, q, 1));
}
BENCHMARK(BM_AbduceHydralazine);

void BM_SolveRandomPrograms(benchmark::State& state) {
  std::mt19937 rng(42);
  testing::RandomProgramSpec spec;
  spec.max_atoms = static_cast<int>(state.range(0));
  spec.max_rules = 2 * spec.max_atoms;
  std::vector<GroundProgram> programs;
  for (int i = 0; i < 50; ++i) programs.push_back(ground_program(testing::random_program(rng, spec)));
  for (auto _ : state) {
    for (const auto& g : programs) {
      Solver s(g);
      for (const auto& a : g.atom_universe) {
        Query q;
        q.goals.push_back(BodyElement::pos(a));
        benchmark::DoNotOptimize(s.solve(q, 1));
      }
    }
  }
}
BENCHMARK(BM_SolveRandomPrograms)->Arg(8)->Arg(12)->Arg(16);

void BM_BruteForceOracle(benchmark::State& state) {
  std::mt19937 rng(42);
  std::vector<GroundProgram> programs;
  for (int i = 0; i < 50; ++i) programs.push_back(ground_program(testing::random_program(rng)));
  for (auto _ : state) {
    for (const auto& g : programs) benchmark::DoNotOptimize(enumerate_stable_models_bruteforce(g));
  }
}
BENCHMARK(BM_BruteForceOracle);

}  // namespace

BENCHMARK_MAIN();
