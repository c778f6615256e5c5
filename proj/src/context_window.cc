#include "cacer/context_window.h"

#include <algorithm>
#include <tuple>

#include "cacer/error.h"
#include "cacer/validate.h"

namespace cacer {
namespace {

bool IsAsciiSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

std::vector<const Event *> SortedEvents(const Document &doc) {
  std::vector<const Event *> out;
  out.reserve(doc.events.size());
  for (const Event &e : doc.events) out.push_back(&e);
  std::sort(out.begin(), out.end(), [](const Event *a, const Event *b) {
    return std::make_tuple(a->trigger.start, a->trigger.end, static_cast<int>(a->type), a->id) <
           std::make_tuple(b->trigger.start, b->trigger.end, static_cast<int>(b->type), b->id);
  });
  return out;
}

}  // namespace

std::size_t EstimateSubwordTokens(std::string_view text) {
  std::size_t tokens = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && IsAsciiSpace(text[i])) ++i;
    std::size_t j = i;
    while (j < text.size() && !IsAsciiSpace(text[j])) ++j;
    if (j > i) {
      const std::size_t len = CodePointLength(text.substr(i, j - i));
      tokens += (len + 5) / 6;
    }
    i = j;
  }
  return tokens;
}

const WindowEvent *ContextWindow::Find(std::string_view event_id) const {
  for (const WindowEvent &we : events) {
    if (we.event.id == event_id) return &we;
  }
  return nullptr;
}

std::map<std::string, std::size_t> TriggerSentences(const Document &doc) {
  std::map<std::string, std::size_t> out;
  if (doc.sentences.empty()) return out;
  for (const Event &e : doc.events) out.emplace(e.id, SentenceIndex(doc, e.trigger).ordinal);
  return out;
}

ContextWindow MakeWindow(const Document &doc, std::size_t first, std::size_t last,
                         const Tokenizer &tok) {
  if (first > last || last >= doc.sentences.size()) {
    throw Error("OUT_OF_BOUNDS", "sentence range [" + std::to_string(first) + "," +
                                     std::to_string(last) + "] invalid for " +
                                     std::to_string(doc.sentences.size()) + " sentences");
  }
  ContextWindow w;
  w.doc_id = doc.doc_id;
  w.first = first;
  w.last = last;
  w.start = doc.sentences[first].start;
  w.end = doc.sentences[last].end;
  w.text = doc.text.slice(w.start, w.end);
  w.token_count = tok(w.text);
  w.intra_sentence = first == last;
  for (const Event *e : SortedEvents(doc)) {
    const std::size_t s = SentenceIndex(doc, e->trigger).ordinal;
    if (s >= first && s <= last) w.events.push_back({*e, s});
  }
  return w;
}

ContextWindow BuildWindow(const Document &doc, const Event &head, const Event &tail,
                          const Tokenizer &tok, const WindowLimits &limits) {
  const std::size_t sh = SentenceIndex(doc, head.trigger).ordinal;
  const std::size_t st = SentenceIndex(doc, tail.trigger).ordinal;
  const std::size_t first = std::min(sh, st);
  const std::size_t last = std::max(sh, st);
  if (last - first + 1 > limits.max_sentences) {
    throw Error("WINDOW_TOO_LONG", std::to_string(last - first + 1) + " sentences > " +
                                       std::to_string(limits.max_sentences));
  }
  ContextWindow w = MakeWindow(doc, first, last, tok);
  if (w.token_count > limits.max_tokens) {
    throw Error("WINDOW_TOO_MANY_TOKENS", std::to_string(w.token_count) + " tokens > " +
                                              std::to_string(limits.max_tokens));
  }
  return w;
}

CandidateSet EnumerateCandidatePairs(const Document &doc, const Tokenizer &tok,
                                     const WindowLimits &limits) {
  CandidateSet out;
  const auto events = SortedEvents(doc);
  std::vector<std::size_t> sentence(events.size());
  for (std::size_t i = 0; i < events.size(); ++i) {
    sentence[i] = SentenceIndex(doc, events[i]->trigger).ordinal;
  }
  // Windows are shared by many pairs; build each sentence range once.
  std::map<std::pair<std::size_t, std::size_t>, ContextWindow> cache;
  for (std::size_t h = 0; h < events.size(); ++h) {
    for (std::size_t t = 0; t < events.size(); ++t) {
      if (h == t || events[t]->type != EventType::kProblem) continue;
      const std::size_t first = std::min(sentence[h], sentence[t]);
      const std::size_t last = std::max(sentence[h], sentence[t]);
      if (last - first + 1 > limits.max_sentences) {
        ++out.excluded_too_long;
        continue;
      }
      auto it = cache.find({first, last});
      if (it == cache.end()) {
        it = cache.emplace(std::make_pair(first, last), MakeWindow(doc, first, last, tok)).first;
      }
      if (it->second.token_count > limits.max_tokens) {
        ++out.excluded_too_many_tokens;
        continue;
      }
      out.pairs.push_back({events[h]->id, events[t]->id, it->second});
    }
  }
  return out;
}

std::vector<CandidateSet> EnumerateCandidatePairs(std::span<const Document> docs,
                                                  const Tokenizer &tok,
                                                  const WindowLimits &limits) {
  std::vector<CandidateSet> out(docs.size());
  const auto n = static_cast<std::ptrdiff_t>(docs.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[i] = EnumerateCandidatePairs(docs[i], tok, limits);
  }
  return out;
}

std::vector<CandidateSet> EnumerateCandidatePairsSerial(std::span<const Document> docs,
                                                        const Tokenizer &tok,
                                                        const WindowLimits &limits) {
  std::vector<CandidateSet> out;
  out.reserve(docs.size());
  for (const Document &d : docs) out.push_back(EnumerateCandidatePairs(d, tok, limits));
  return out;
}

bool PassesValidityFilter(const ContextWindow &window, const Relation &relation) {
  const WindowEvent *head = window.Find(relation.head);
  const WindowEvent *tail = window.Find(relation.tail);
  if (!head || !tail) return false;
  if (window.first == window.last) return true;
  if (head->sentence == window.first && tail->sentence == window.last) return true;
  if (tail->sentence == window.first && head->sentence == window.last) return true;
  return false;
}

CoverageCounts &CoverageCounts::operator+=(const CoverageCounts &o) {
  total += o.total;
  within_limits += o.within_limits;
  intra_sentence += o.intra_sentence;
  return *this;
}

double Fraction(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

double CoverageStats::coverage() const { return Fraction(overall.within_limits, overall.total); }

double CoverageStats::intra_fraction() const {
  return Fraction(overall.intra_sentence, overall.total);
}

CoverageStats &CoverageStats::operator+=(const CoverageStats &o) {
  overall += o.overall;
  for (const auto &[type, counts] : o.by_type) by_type[type] += counts;
  return *this;
}

CoverageStats CoverageReport(std::span<const Document> docs, const Tokenizer &tok,
                             const WindowLimits &limits) {
  CoverageStats stats;
  for (const Document &doc : docs) {
    const auto sentence_of = TriggerSentences(doc);
    for (const Relation &r : doc.relations) {
      auto h = sentence_of.find(r.head);
      auto t = sentence_of.find(r.tail);
      if (h == sentence_of.end() || t == sentence_of.end()) continue;
      CoverageCounts c;
      c.total = 1;
      const std::size_t first = std::min(h->second, t->second);
      const std::size_t last = std::max(h->second, t->second);
      c.intra_sentence = first == last ? 1 : 0;
      if (last - first + 1 <= limits.max_sentences) {
        const std::size_t start = doc.sentences[first].start;
        const std::size_t end = doc.sentences[last].end;
        c.within_limits = tok(doc.text.slice_view(start, end)) <= limits.max_tokens ? 1 : 0;
      }
      stats.overall += c;
      stats.by_type[r.type] += c;
    }
  }
  return stats;
}

}  // namespace cacer
