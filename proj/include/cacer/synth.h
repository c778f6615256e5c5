#ifndef CACER_SYNTH_H_
#define CACER_SYNTH_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cacer/schema.h"

namespace cacer {

// Phrase lists the generator composes sentences from. Entries must be
// non-empty and free of sentence punctuation, tags and line breaks; fillers
// are whole event-free sentences ending in '.'.
struct Lexicons {
  std::vector<std::string> problems;
  std::vector<std::string> drugs;
  std::vector<std::string> anatomy;
  std::vector<std::string> characteristics;
  std::vector<std::string> durations;
  std::vector<std::string> frequencies;
  std::vector<std::string> fillers;

  // The lists embedded in the library.
  static Lexicons Default();
  // Reads <name>.txt for each list from `dir`; lists without a file keep the
  // embedded default.
  static Lexicons Load(const std::filesystem::path &dir);
};

// One phrase per line; blank lines and lines starting with '#' are skipped.
std::vector<std::string> ParseLexicon(std::string_view text);

struct GenConfig {
  std::uint64_t seed = 0;
  std::size_t n_notes = 100;
  std::size_t min_sentences = 4;
  std::size_t max_sentences = 12;

  // Share of Problem triggers among all triggers.
  double problem_fraction = 21453.0 / 32571.0;
  // Probability that a Problem carries each argument type, indexed by
  // ArgumentType. Assertion must be 1.
  std::array<double, 7> attach = {1.0,           1440.0 / 21453, 775.0 / 21453,
                                  9880.0 / 21453, 4749.0 / 21453, 930.0 / 21453,
                                  245.0 / 21453};
  // Chance that a Characteristics argument has a second span.
  double second_characteristic = 0.2;
  // Subtype frequencies indexed by Subtype; sums to 1 within each owner.
  std::array<double, 13> subtypes = {0.72, 0.14, 0.06, 0.03, 0.03, 0.02,  // Assertion
                                     0.35, 0.20, 0.30, 0.15,              // Change
                                     0.40, 0.35, 0.25};                   // Severity
  // Relation-type mix indexed by RelationType; sums to 1.
  std::array<double, 6> relation_mix = {3715.0 / 6590, 130.0 / 6590, 729.0 / 6590,
                                        502.0 / 6590,  257.0 / 6590, 1257.0 / 6590};
  double intra_fraction = 0.707;
  // Share of relations whose endpoints are 6-8 sentences apart.
  double long_range_fraction = 0.013;

  // Composition of a note by unit: relation units, single-event sentences,
  // filler sentences. Sums to 1.
  double relation_units = 0.45;
  double event_units = 0.40;
  double filler_units = 0.15;

  Lexicons lexicons = Lexicons::Default();

  // Throws Error("INVALID_CONFIG").
  void Validate() const;
  // Probability that a single-event sentence holds a Problem, chosen so the
  // expected Problem share over all triggers equals problem_fraction.
  double StandaloneProblemProbability() const;
  // Stable digest of every field, for manifests.
  std::uint64_t Digest() const;
};

// Note `index` of the corpus; a pure function of (cfg, index).
Document GenerateNote(const GenConfig &cfg, std::size_t index);

// Notes are generated in parallel, each from its own derived seed.
std::vector<Document> GenerateCorpus(const GenConfig &cfg);
// Serial reference for GenerateCorpus().
std::vector<Document> GenerateCorpusSerial(const GenConfig &cfg);

// Digest of the standoff serialization of every document, in order.
std::uint64_t CorpusDigest(std::span<const Document> docs);

// Exact error counts applied by Perturb(). Counts beyond what the document
// allows are clipped.
struct NoiseSpec {
  std::size_t drop_triggers = 0;     // also drops the relations they take part in
  std::size_t insert_triggers = 0;   // spurious Drug triggers overlapping no trigger
  std::size_t flip_labels = 0;       // Assertion label replaced by another
  std::size_t jitter_spans = 0;      // trigger shrunk by one character, still overlapping
  std::size_t drop_relations = 0;
  std::size_t insert_relations = 0;  // between events not yet related

  bool none() const {
    return drop_triggers + insert_triggers + flip_labels + jitter_spans + drop_relations +
               insert_relations ==
           0;
  }
};

// Copy of `doc` marked as a prediction, with the requested errors.
Document Perturb(const Document &doc, const NoiseSpec &noise, std::uint64_t seed);

}  // namespace cacer

#endif  // CACER_SYNTH_H_
