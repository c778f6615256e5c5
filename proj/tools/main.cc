// cacer: command-line entry point.
//
// Exit status: 0 ok, 1 validation errors or missed score threshold,
// 2 unreadable input or bad usage.

#include <iostream>

#include <CLI11.hpp>

#include "cacer/error.h"
#include "commands.h"

namespace {

using namespace cacer::cli;

void AddManifest(CLI::App *cmd, std::string &path) {
  cmd->add_option("--manifest", path, "Where to write the run manifest");
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Clinical event and relation annotation toolkit"};
  app.set_version_flag("--version", std::string(CACER_VERSION));
  app.require_subcommand(1);

  ValidateArgs validate;
  auto *v = app.add_subcommand("validate", "Check a standoff corpus against the schema");
  v->add_option("corpus", validate.corpus, "Directory of .txt/.ann pairs")->required();
  v->add_flag("--strict", validate.strict, "Fail on warnings too");
  v->add_option("--report", validate.report, "JSONL violation report");
  AddManifest(v, validate.manifest);

  ScoreArgs score;
  auto *s = app.add_subcommand("score", "Score predictions against gold annotations");
  s->add_option("gold", score.gold, "Gold corpus directory")->required();
  s->add_option("pred", score.pred, "Predicted corpus directory")->required();
  ScoreArgs iaa;
  auto *i = app.add_subcommand("iaa", "Agreement between two annotators");
  i->add_option("a", iaa.gold, "Annotator A corpus (plays gold)")->required();
  i->add_option("b", iaa.pred, "Annotator B corpus")->required();
  for (auto [cmd, args] : {std::pair{s, &score}, std::pair{i, &iaa}}) {
    cmd->add_option("--report", args->report, "Prefix for <prefix>.json and <prefix>.txt");
    cmd->add_option("--per-note", args->per_note, "Per-note F1 as doc_id<TAB>F1 lines");
    cmd->add_option("--per-note-row", args->per_note_row, "Report row used for --per-note")
        ->capture_default_str();
    cmd->add_flag("--exact", args->exact, "Require identical offsets instead of overlap");
    cmd->add_flag("--optimal", args->optimal, "Maximum bipartite matching instead of greedy");
    cmd->add_option("--min-f1", args->min_f1, "Exit 1 when overall F1 is below this value");
    AddManifest(cmd, args->manifest);
  }

  SigtestArgs sig;
  auto *b = app.add_subcommand("sigtest", "Paired bootstrap test that system A beats system B");
  b->add_option("scores_a", sig.scores_a, "Per-note scores of A (doc_id<TAB>score)")->required();
  b->add_option("scores_b", sig.scores_b, "Per-note scores of B")->required();
  b->add_option("--iterations", sig.iterations, "Bootstrap resamples")->capture_default_str();
  b->add_option("--seed", sig.seed, std::string("Seed (default: $") + kSeedEnv + " or 0)");
  b->add_option("--mode", sig.mode, "auto, montecarlo or exhaustive")->capture_default_str();
  b->add_option("--out", sig.out, "Write the result JSON here");
  AddManifest(b, sig.manifest);

  WindowsArgs win;
  auto *w = app.add_subcommand("windows", "Candidate pairs and window coverage statistics");
  w->add_option("corpus", win.corpus, "Directory of .txt/.ann pairs")->required();
  w->add_option("--max-sent", win.max_sent, "Sentence limit")->capture_default_str();
  w->add_option("--max-tokens", win.max_tokens, "Token limit")->capture_default_str();
  w->add_option("--out", win.out, "Candidate pairs as JSONL");
  w->add_option("--stats", win.stats, "Coverage statistics as JSON");
  AddManifest(w, win.manifest);

  CodecArgs enc;
  auto *e = app.add_subcommand("encode", "Render model inputs and gold targets");
  e->add_option("corpus", enc.corpus, "Directory of .txt/.ann pairs")->required();
  e->add_option("--out", enc.out, "JSONL records {id, doc_id, input, target}")->required();
  CodecArgs dec;
  auto *d = app.add_subcommand("decode", "Parse model outputs into a predicted corpus");
  d->add_option("corpus", dec.corpus, "Corpus the predictions refer to")->required();
  d->add_option("--predictions", dec.predictions, "JSONL records {id, output}")->required();
  d->add_option("--out-dir", dec.out_dir, "Predicted standoff corpus")->required();
  d->add_option("--issues", dec.issues, "Decode issues as JSONL");
  for (auto [cmd, args] : {std::pair{e, &enc}, std::pair{d, &dec}}) {
    cmd->add_option("--format", args->format, "events, marker or qa")->capture_default_str();
    cmd->add_option("--max-sent", args->max_sent, "Window sentence limit")->capture_default_str();
    cmd->add_option("--max-tokens", args->max_tokens, "Window token limit")->capture_default_str();
    cmd->add_option("--qa-mapping", args->qa_mapping, "Option overrides, e.g. C=Worsens,F=none");
    AddManifest(cmd, args->manifest);
  }

  GenArgs gen;
  auto *g = app.add_subcommand("gen", "Generate a synthetic annotated corpus");
  g->add_option("--config", gen.config, "GenConfig JSON");
  g->add_option("--out", gen.out_dir, "Output directory")->required();
  g->add_option("--seed", gen.seed, std::string("Seed (default: config, $") + kSeedEnv + " or 0)");
  g->add_option("--n-notes", gen.n_notes, "Number of notes");
  g->add_option("--lexicon-dir", gen.lexicon_dir, "Directory of <list>.txt lexicon overrides");
  AddManifest(g, gen.manifest);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &err) {
    const int rc = app.exit(err);
    return rc == 0 ? kOk : kInputError;
  }

  try {
    if (*v) return RunValidate(validate, std::cout);
    if (*s) return RunScore(score, std::cout, false);
    if (*i) return RunScore(iaa, std::cout, true);
    if (*b) return RunSigtest(sig, std::cout);
    if (*w) return RunWindows(win, std::cout);
    if (*e) return RunEncode(enc, std::cout);
    if (*d) return RunDecode(dec, std::cout);
    if (*g) return RunGen(gen, std::cout);
  } catch (const cacer::Error &err) {
    std::cerr << "cacer: " << err.what() << "\n";
    return kInputError;
  } catch (const std::exception &err) {
    std::cerr << "cacer: " << err.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
