#ifndef CACER_TOOLS_COMMANDS_H_
#define CACER_TOOLS_COMMANDS_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace cacer::cli {

enum ExitCode : int {
  kOk = 0,
  kFailed = 1,      // validation errors or a missed score threshold
  kInputError = 2,  // unreadable input or bad usage
};

// Environment variable holding the default seed.
inline constexpr const char *kSeedEnv = "CACER_SEED";

struct ValidateArgs {
  std::string corpus;
  bool strict = false;
  std::string report;  // JSONL violations; empty = none
  std::string manifest;
};

struct ScoreArgs {
  std::string gold;
  std::string pred;
  std::string report;  // prefix for <prefix>.json and <prefix>.txt
  std::string per_note;
  std::string per_note_row = "Overall";
  bool exact = false;
  bool optimal = false;
  std::optional<double> min_f1;
  std::string manifest;
};

struct SigtestArgs {
  std::string scores_a;
  std::string scores_b;
  std::size_t iterations = 10000;
  std::optional<std::uint64_t> seed;
  std::string mode = "auto";
  std::string out;
  std::string manifest;
};

struct WindowsArgs {
  std::string corpus;
  std::size_t max_sent = 5;
  std::size_t max_tokens = 400;
  std::string out;
  std::string stats;
  std::string manifest;
};

struct CodecArgs {
  std::string corpus;
  std::string format = "events";
  std::size_t max_sent = 5;
  std::size_t max_tokens = 400;
  std::string qa_mapping;
  std::string out;          // encode: JSONL records
  std::string predictions;  // decode: JSONL {"id", "output"}
  std::string out_dir;      // decode: predicted standoff corpus
  std::string issues;       // decode: JSONL issues
  std::string manifest;
};

struct GenArgs {
  std::string config;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> n_notes;
  std::string lexicon_dir;
  std::string manifest;
};

int RunValidate(const ValidateArgs &a, std::ostream &out);
int RunScore(const ScoreArgs &a, std::ostream &out, bool iaa);
int RunSigtest(const SigtestArgs &a, std::ostream &out);
int RunWindows(const WindowsArgs &a, std::ostream &out);
int RunEncode(const CodecArgs &a, std::ostream &out);
int RunDecode(const CodecArgs &a, std::ostream &out);
int RunGen(const GenArgs &a, std::ostream &out);

}  // namespace cacer::cli

#endif  // CACER_TOOLS_COMMANDS_H_
