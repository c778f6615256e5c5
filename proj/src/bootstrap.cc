#include "cacer/bootstrap.h"

#include <cmath>
#include <string>

#include "cacer/error.h"
#include "cacer/random.h"

namespace cacer {
namespace {

constexpr std::uint64_t kMaxExhaustive = std::uint64_t{1} << 24;

// n^n, saturating at kMaxExhaustive + 1.
std::uint64_t ResampleSpace(std::size_t n) {
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < n; ++i) {
    total *= n;
    if (total > kMaxExhaustive) return kMaxExhaustive + 1;
  }
  return total;
}

// Resample number `k` in base-n digits, most significant first.
void DecodeResample(std::uint64_t k, std::size_t n, std::vector<std::uint32_t> &sample) {
  for (std::size_t i = n; i-- > 0;) {
    sample[i] = static_cast<std::uint32_t>(k % n);
    k /= n;
  }
}

void CheckAligned(std::span<const NoteScore> a, std::span<const NoteScore> b) {
  if (a.size() != b.size()) {
    throw Error("MISALIGNED_SAMPLES", "lists have " + std::to_string(a.size()) + " and " +
                                          std::to_string(b.size()) + " notes");
  }
  if (a.size() < 2) throw Error("MISALIGNED_SAMPLES", "need at least two notes");
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].doc_id != b[i].doc_id) {
      throw Error("MISALIGNED_SAMPLES", "note " + std::to_string(i) + ": " + a[i].doc_id +
                                            " vs " + b[i].doc_id);
    }
    if (!std::isfinite(a[i].value) || !std::isfinite(b[i].value)) {
      throw Error("MISALIGNED_SAMPLES", "non-finite score for " + a[i].doc_id);
    }
  }
}

SigTestResult Run(std::span<const NoteScore> a, std::span<const NoteScore> b,
                  const BootstrapOptions &opts, bool parallel) {
  CheckAligned(a, b);
  const std::size_t n = a.size();
  std::vector<double> diffs(n);
  for (std::size_t i = 0; i < n; ++i) diffs[i] = a[i].value - b[i].value;

  SigTestResult r;
  r.a.assign(a.begin(), a.end());
  r.b.assign(b.begin(), b.end());
  r.iterations = opts.iterations;
  r.seed = opts.seed;
  {
    std::vector<std::uint32_t> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = static_cast<std::uint32_t>(i);
    r.observed_difference = opts.statistic(diffs, all);
  }

  const std::uint64_t space = ResampleSpace(n);
  switch (opts.mode) {
    case ResampleMode::kAuto:
      r.exhaustive = space <= opts.iterations;
      break;
    case ResampleMode::kMonteCarlo:
      r.exhaustive = false;
      break;
    case ResampleMode::kExhaustive:
      if (space > kMaxExhaustive) {
        throw Error("TOO_MANY_RESAMPLES", std::to_string(n) + "^" + std::to_string(n));
      }
      r.exhaustive = true;
      break;
  }
  if (!r.exhaustive && opts.iterations == 0) {
    throw Error("MISALIGNED_SAMPLES", "iterations must be positive");
  }
  r.resamples = r.exhaustive ? static_cast<std::size_t>(space) : opts.iterations;

  const auto total = static_cast<std::int64_t>(r.resamples);
  std::size_t hits = 0;
  auto evaluate = [&](std::int64_t k, std::vector<std::uint32_t> &sample) {
    if (r.exhaustive) {
      DecodeResample(static_cast<std::uint64_t>(k), n, sample);
    } else {
      Rng rng(ResampleSeed(opts.seed, static_cast<std::uint64_t>(k)));
      for (std::size_t i = 0; i < n; ++i) sample[i] = static_cast<std::uint32_t>(rng.Below(n));
    }
    return opts.statistic(diffs, sample) <= 0.0;
  };
  if (parallel) {
#pragma omp parallel
    {
      std::vector<std::uint32_t> sample(n);
#pragma omp for schedule(static) reduction(+ : hits)
      for (std::int64_t k = 0; k < total; ++k) {
        if (evaluate(k, sample)) ++hits;
      }
    }
  } else {
    std::vector<std::uint32_t> sample(n);
    for (std::int64_t k = 0; k < total; ++k) {
      if (evaluate(k, sample)) ++hits;
    }
  }
  r.at_or_below_zero = hits;
  r.p_value = static_cast<double>(hits) / static_cast<double>(r.resamples);
  return r;
}

}  // namespace

double MeanDifference(std::span<const double> diffs, std::span<const std::uint32_t> sample) {
  double sum = 0.0;
  for (std::uint32_t i : sample) sum += diffs[i];
  return sum / static_cast<double>(sample.size());
}

std::uint64_t ResampleSeed(std::uint64_t seed, std::uint64_t iteration) {
  return DeriveSeed(seed, iteration);
}

std::vector<std::uint32_t> DrawResample(std::uint64_t seed, std::uint64_t iteration, std::size_t n) {
  Rng rng(ResampleSeed(seed, iteration));
  std::vector<std::uint32_t> sample(n);
  for (std::size_t i = 0; i < n; ++i) sample[i] = static_cast<std::uint32_t>(rng.Below(n));
  return sample;
}

SigTestResult BootstrapTest(std::span<const NoteScore> a, std::span<const NoteScore> b,
                            const BootstrapOptions &opts) {
  return Run(a, b, opts, true);
}

SigTestResult BootstrapTestSerial(std::span<const NoteScore> a, std::span<const NoteScore> b,
                                  const BootstrapOptions &opts) {
  return Run(a, b, opts, false);
}

}  // namespace cacer
