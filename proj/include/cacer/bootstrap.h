#ifndef CACER_BOOTSTRAP_H_
#define CACER_BOOTSTRAP_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "cacer/scorer.h"

namespace cacer {

enum class ResampleMode {
  kAuto,        // exhaustive when n^n <= iterations, Monte Carlo otherwise
  kMonteCarlo,  // always draw `iterations` random resamples
  kExhaustive,  // enumerate all n^n resamples; throws TOO_MANY_RESAMPLES if n^n > 2^24
};

// Resample statistic; returns the value whose sign decides the test. The
// default is the mean of the paired differences.
using ResampleStatistic = double (*)(std::span<const double> diffs,
                                     std::span<const std::uint32_t> sample);
double MeanDifference(std::span<const double> diffs, std::span<const std::uint32_t> sample);

struct BootstrapOptions {
  std::size_t iterations = 10000;
  std::uint64_t seed = 0;
  ResampleMode mode = ResampleMode::kAuto;
  ResampleStatistic statistic = &MeanDifference;
};

struct SigTestResult {
  std::vector<NoteScore> a;
  std::vector<NoteScore> b;
  double observed_difference = 0.0;  // mean(A) - mean(B) over all notes
  double p_value = 1.0;              // fraction of resamples with statistic <= 0
  std::size_t iterations = 0;        // requested
  std::size_t resamples = 0;         // evaluated
  std::size_t at_or_below_zero = 0;
  bool exhaustive = false;
  std::uint64_t seed = 0;

  bool significant(double alpha = 0.05) const { return p_value < alpha; }
  bool operator==(const SigTestResult &) const = default;
};

// Paired one-sided bootstrap (A > B) where a sample is a note. Resample i
// draws from its own generator seeded by (seed, i), so results do not depend
// on the thread count. Throws Error("MISALIGNED_SAMPLES") when the lists
// differ in length or doc_id order, or hold fewer than two notes.
SigTestResult BootstrapTest(std::span<const NoteScore> a, std::span<const NoteScore> b,
                            const BootstrapOptions &opts = {});
// Serial reference for BootstrapTest().
SigTestResult BootstrapTestSerial(std::span<const NoteScore> a, std::span<const NoteScore> b,
                                  const BootstrapOptions &opts = {});

// Seed of the generator used for Monte Carlo resample `iteration`.
std::uint64_t ResampleSeed(std::uint64_t seed, std::uint64_t iteration);

// Indices of Monte Carlo resample `iteration` over n notes.
std::vector<std::uint32_t> DrawResample(std::uint64_t seed, std::uint64_t iteration, std::size_t n);

}  // namespace cacer

#endif  // CACER_BOOTSTRAP_H_
