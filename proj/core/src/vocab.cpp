#include "sitewatch/vocab.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

#include "sitewatch/errors.hpp"

namespace sitewatch {

const char* to_string(CategoryKind kind) {
  switch (kind) {
    case CategoryKind::TargetObject: return "target";
    case CategoryKind::NullClass: return "null";
    case CategoryKind::ScaffoldVertical: return "scaffold_vertical";
    case CategoryKind::ScaffoldHorizontal: return "scaffold_horizontal";
  }
  return "?";
}

std::string normalize_descriptor(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  bool pending_space = false;
  for (unsigned char c : raw) {
    if (std::isspace(c)) {
      if (!out.empty()) pending_space = true;
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

Vocabulary::Vocabulary(std::vector<Category> categories)
    : categories_(std::move(categories)) {
  for (std::size_t i = 0; i < categories_.size(); ++i) {
    const Category& cat = categories_[i];
    if (cat.name.empty()) throw ConfigError("vocabulary: category with empty name");
    if (cat.band.lo > cat.band.hi) {
      throw ConfigError("vocabulary: category '" + cat.name + "' has inverted band [" +
                        std::to_string(cat.band.lo) + ", " + std::to_string(cat.band.hi) + "]");
    }
    if (cat.band.lo < 0.0 || cat.band.hi > 1.0) {
      throw ConfigError("vocabulary: category '" + cat.name + "' band outside [0, 1]");
    }
    for (std::size_t j = i + 1; j < categories_.size(); ++j) {
      if (categories_[j].name == cat.name) {
        throw ConfigError("vocabulary: duplicate category name '" + cat.name + "'");
      }
    }
    for (const std::string& d : cat.descriptors) {
      std::string key = normalize_descriptor(d);
      if (key.empty()) {
        throw ConfigError("vocabulary: category '" + cat.name + "' has an empty descriptor");
      }
      auto [it, inserted] = by_descriptor_.emplace(std::move(key), i);
      if (!inserted) {
        throw ConfigError("vocabulary: descriptor '" + normalize_descriptor(d) +
                          "' maps to both '" + categories_[it->second].name + "' and '" +
                          cat.name + "'");
      }
    }
  }
}

const Category* Vocabulary::canonicalize(std::string_view raw_label) const {
  auto it = by_descriptor_.find(normalize_descriptor(raw_label));
  if (it == by_descriptor_.end()) return nullptr;
  return &categories_[it->second];
}

const Category* Vocabulary::find_category(std::string_view name) const {
  for (const Category& cat : categories_) {
    if (cat.name == name) return &cat;
  }
  return nullptr;
}

bool within_band(const Detection& d, const Vocabulary& vocab) {
  const Category* cat = vocab.canonicalize(d.label);
  if (cat == nullptr) return false;
  return cat->band.contains(d.confidence);
}

std::vector<Detection> dedup_detections(const std::vector<Detection>& detections,
                                        const Vocabulary& vocab,
                                        double iou_threshold) {
  const std::size_t n = detections.size();
  std::vector<const Category*> cats(n);
  for (std::size_t i = 0; i < n; ++i) cats[i] = vocab.canonicalize(detections[i].label);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return detections[a].confidence > detections[b].confidence;
  });

  std::vector<char> keep(n, 1);
  std::vector<std::size_t> kept;
  kept.reserve(n);
  for (std::size_t idx : order) {
    if (cats[idx] == nullptr) continue;  // unknown labels are left alone
    bool suppressed = false;
    for (std::size_t prev : kept) {
      if (cats[prev] != cats[idx]) continue;
      if (iou(detections[prev].box, detections[idx].box) > iou_threshold) {
        suppressed = true;
        break;
      }
    }
    if (suppressed) {
      keep[idx] = 0;
    } else {
      kept.push_back(idx);
    }
  }

  std::vector<Detection> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (keep[i]) out.push_back(detections[i]);
  }
  return out;
}

EvidenceCounts tally_detections(const FrameRecord& frame, const Vocabulary& vocab,
                                double iou_threshold) {
  // Funnel order: unknown labels and out-of-band confidences go first, then
  // duplicates, then null classes.  Null detections must survive to the
  // dedup stage untouched only in the sense that dropping them earlier
  // changes nothing: suppression never crosses categories.
  std::vector<Detection> kept;
  kept.reserve(frame.detections.size());
  for (const Detection& d : frame.detections) {
    const Category* cat = vocab.canonicalize(d.label);
    if (cat == nullptr) continue;
    if (!cat->band.contains(d.confidence)) continue;
    kept.push_back(d);
  }
  kept = dedup_detections(kept, vocab, iou_threshold);

  EvidenceCounts counts;
  for (const Detection& d : kept) {
    const Category* cat = vocab.canonicalize(d.label);
    switch (cat->kind) {
      case CategoryKind::NullClass:
        break;
      case CategoryKind::ScaffoldVertical:
      case CategoryKind::ScaffoldHorizontal:
        ++counts.scaffold_count;
        break;
      case CategoryKind::TargetObject:
        ++counts.object_count;
        ++counts.object_breakdown[cat->name];
        break;
    }
  }
  return counts;
}

}  // namespace sitewatch
