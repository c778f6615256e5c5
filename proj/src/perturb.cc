#include <algorithm>
#include <numeric>
#include <set>

#include "cacer/random.h"
#include "cacer/synth.h"
#include "cacer/text.h"

namespace cacer {
namespace {

// k distinct indices from [0, n), ascending.
std::vector<std::size_t> Choose(Rng &rng, std::size_t n, std::size_t k) {
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), 0);
  k = std::min(k, n);
  for (std::size_t i = 0; i < k; ++i) std::swap(all[i], all[i + rng.Below(n - i)]);
  all.resize(k);
  std::sort(all.begin(), all.end());
  return all;
}

template <typename T, typename Keep>
void EraseIf(std::vector<T> &v, Keep drop) {
  v.erase(std::remove_if(v.begin(), v.end(), drop), v.end());
}

// Word spans inside sentences that overlap no trigger.
std::vector<std::pair<std::size_t, std::size_t>> FreeWords(const Document &doc) {
  std::vector<std::pair<std::size_t, std::size_t>> words;
  const NoteText &t = doc.text;
  for (const Span &s : doc.sentences) {
    std::size_t i = s.start;
    while (i < s.end) {
      if (!IsWordChar(t.at(i))) {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < s.end && IsWordChar(t.at(j))) ++j;
      const Span w{i, j, {}};
      bool clear = true;
      for (const Event &e : doc.events) clear = clear && !Overlaps(e.trigger, w);
      if (clear) words.emplace_back(i, j);
      i = j;
    }
  }
  return words;
}

}  // namespace

Document Perturb(const Document &doc, const NoiseSpec &noise, std::uint64_t seed) {
  Document out = doc;
  out.source = "predicted";
  Rng rng(seed);

  {
    std::set<std::string> dropped;
    for (std::size_t i : Choose(rng, out.events.size(), noise.drop_triggers)) {
      dropped.insert(out.events[i].id);
    }
    EraseIf(out.events, [&](const Event &e) { return dropped.count(e.id) > 0; });
    EraseIf(out.relations, [&](const Relation &r) {
      return dropped.count(r.head) > 0 || dropped.count(r.tail) > 0;
    });
  }

  {
    const auto drop = Choose(rng, out.relations.size(), noise.drop_relations);
    std::vector<Relation> kept;
    for (std::size_t i = 0; i < out.relations.size(); ++i) {
      if (!std::binary_search(drop.begin(), drop.end(), i)) kept.push_back(out.relations[i]);
    }
    out.relations = std::move(kept);
  }

  {
    std::vector<std::size_t> problems;
    for (std::size_t i = 0; i < out.events.size(); ++i) {
      if (out.events[i].type == EventType::kProblem) problems.push_back(i);
    }
    for (std::size_t k : Choose(rng, problems.size(), noise.flip_labels)) {
      for (Argument &a : out.events[problems[k]].arguments) {
        if (a.type != ArgumentType::kAssertion || !a.label) continue;
        const auto labels = LabelsFor(ArgumentType::kAssertion);
        const auto at = std::find(labels.begin(), labels.end(), *a.label) - labels.begin();
        a.label = labels[(static_cast<std::size_t>(at) + 1 + rng.Below(labels.size() - 1)) %
                         labels.size()];
        break;
      }
    }
  }

  {
    std::vector<std::size_t> long_enough;
    for (std::size_t i = 0; i < out.events.size(); ++i) {
      if (out.events[i].trigger.length() >= 2) long_enough.push_back(i);
    }
    for (std::size_t k : Choose(rng, long_enough.size(), noise.jitter_spans)) {
      Span &t = out.events[long_enough[k]].trigger;
      if (rng.Bernoulli(0.5)) {
        t = MakeSpan(out.text, t.start + 1, t.end);
      } else {
        t = MakeSpan(out.text, t.start, t.end - 1);
      }
    }
  }

  {
    auto words = FreeWords(doc);
    std::size_t serial = 0;
    for (std::size_t k : Choose(rng, words.size(), noise.insert_triggers)) {
      Event e;
      do {
        e.id = "X" + std::to_string(++serial);
      } while (out.FindEvent(e.id) != nullptr);
      e.type = EventType::kDrug;
      e.trigger = MakeSpan(out.text, words[k].first, words[k].second);
      out.events.push_back(std::move(e));
    }
  }

  {
    std::set<std::pair<std::string, std::string>> related;
    for (const Relation &r : doc.relations) {
      related.insert({r.head, r.tail});
      related.insert({r.tail, r.head});
    }
    std::vector<Relation> options;
    for (const Event &h : out.events) {
      for (const Event &t : out.events) {
        if (h.id == t.id || t.type != EventType::kProblem) continue;
        if (related.count({h.id, t.id})) continue;
        if (h.type == EventType::kDrug) {
          options.push_back({RelationType::kAdminFor, h.id, t.id});
        } else if (h.id < t.id) {
          options.push_back({RelationType::kPip, h.id, t.id});
        }
      }
    }
    for (std::size_t k : Choose(rng, options.size(), noise.insert_relations)) {
      out.relations.push_back(options[k]);
    }
  }
  return out;
}

}  // namespace cacer
