// Parallel kernels against their serial references.

#include <benchmark/benchmark.h>

#include <vector>

#include "cacer/bootstrap.h"
#include "cacer/context_window.h"
#include "cacer/scorer.h"
#include "cacer/synth.h"

namespace {

const std::vector<cacer::Document> &Corpus() {
  static const std::vector<cacer::Document> docs = [] {
    cacer::GenConfig cfg;
    cfg.seed = 11;
    cfg.n_notes = 400;
    return cacer::GenerateCorpusSerial(cfg);
  }();
  return docs;
}

const std::vector<cacer::Document> &Predictions() {
  static const std::vector<cacer::Document> docs = [] {
    std::vector<cacer::Document> out;
    cacer::NoiseSpec noise;
    noise.drop_triggers = 2;
    noise.insert_triggers = 2;
    noise.jitter_spans = 3;
    noise.insert_relations = 1;
    for (std::size_t i = 0; i < Corpus().size(); ++i) out.push_back(cacer::Perturb(Corpus()[i], noise, i));
    return out;
  }();
  return docs;
}

std::vector<cacer::NoteScore> Scores(double shift) {
  std::vector<cacer::NoteScore> s;
  for (int i = 0; i < 200; ++i) {
    s.push_back({"n" + std::to_string(i), 0.5 + 0.3 * ((i * 37) % 11) / 11.0 + shift});
  }
  return s;
}

void BM_Score(benchmark::State &state) {
  for (auto _ : state) benchmark::DoNotOptimize(cacer::Score(Corpus(), Predictions()));
}
void BM_ScoreSerial(benchmark::State &state) {
  for (auto _ : state) benchmark::DoNotOptimize(cacer::ScoreSerial(Corpus(), Predictions()));
}

void BM_Bootstrap(benchmark::State &state) {
  const auto a = Scores(0.01);
  const auto b = Scores(0.0);
  for (auto _ : state) benchmark::DoNotOptimize(cacer::BootstrapTest(a, b));
}
void BM_BootstrapSerial(benchmark::State &state) {
  const auto a = Scores(0.01);
  const auto b = Scores(0.0);
  for (auto _ : state) benchmark::DoNotOptimize(cacer::BootstrapTestSerial(a, b));
}

void BM_Candidates(benchmark::State &state) {
  for (auto _ : state) benchmark::DoNotOptimize(cacer::EnumerateCandidatePairs(Corpus()));
}
void BM_CandidatesSerial(benchmark::State &state) {
  for (auto _ : state) benchmark::DoNotOptimize(cacer::EnumerateCandidatePairsSerial(Corpus()));
}

void BM_Generate(benchmark::State &state) {
  cacer::GenConfig cfg;
  cfg.n_notes = 200;
  for (auto _ : state) benchmark::DoNotOptimize(cacer::GenerateCorpus(cfg));
}
void BM_GenerateSerial(benchmark::State &state) {
  cacer::GenConfig cfg;
  cfg.n_notes = 200;
  for (auto _ : state) benchmark::DoNotOptimize(cacer::GenerateCorpusSerial(cfg));
}

BENCHMARK(BM_Score)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ScoreSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Bootstrap)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_BootstrapSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Candidates)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_CandidatesSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Generate)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_GenerateSerial)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
