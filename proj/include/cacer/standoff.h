#ifndef CACER_STANDOFF_H_
#define CACER_STANDOFF_H_

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "cacer/schema.h"

namespace cacer {

// Pluggable sentence segmentation: note text -> sorted, disjoint spans.
using SentenceSplitter = std::function<std::vector<Span>(const NoteText &)>;

// Rule-based default splitter. Splits after sentence-final punctuation that is
// followed by whitespace, at blank lines, and after lines whose last
// non-blank character is ':' (section headers). Spans are trimmed of
// surrounding whitespace and together cover every non-whitespace character.
std::vector<Span> SegmentSentences(const NoteText &text);

// Paired note text and line-oriented standoff annotations.
struct StandoffFilePair {
  std::string text;
  std::string ann;
};

// Parses a standoff pair into a Document. Throws StandoffError with one of
// MALFORMED_LINE, DANGLING_REFERENCE, DISCONTINUOUS_SPAN,
// OFFSET_TEXT_MISMATCH, INVALID_LABEL or ORPHAN_SPAN.
Document ParseStandoff(const StandoffFilePair &pair, const SentenceSplitter &splitter,
                       std::string doc_id = "");
Document ParseStandoff(const StandoffFilePair &pair, std::string doc_id = "");

// Deterministic writer; ids are assigned in document event order. Throws
// Error("UNWRITABLE_SPAN") when a span's text disagrees with its offsets.
StandoffFilePair WriteStandoff(const Document &doc);

// Directory convention: one <name>.txt + <name>.ann pair per note.
// Returns sorted basenames; throws Error("MISSING_ANN") / Error("MISSING_TXT")
// for unpaired files and Error("IO_ERROR") if the directory is unreadable.
std::vector<std::string> ListCorpus(const std::filesystem::path &dir);
StandoffFilePair ReadPair(const std::filesystem::path &dir, const std::string &name);
Document ReadDocument(const std::filesystem::path &dir, const std::string &name,
                      const SentenceSplitter &splitter = SegmentSentences);
void WriteDocument(const std::filesystem::path &dir, const Document &doc);

std::string ReadFile(const std::filesystem::path &path);
void WriteFile(const std::filesystem::path &path, const std::string &content);

}  // namespace cacer

#endif  // CACER_STANDOFF_H_
