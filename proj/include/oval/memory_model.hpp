#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "oval/error.hpp"
#include "oval/geometry.hpp"
#include "oval/histogram.hpp"

namespace oval {

// Small synthetic image patch. latent_feature_id identifies the physical
// instance the pixels were rendered from and is what the feature-matcher
// oracle keys on; pixels are carried for realism and dropped from
// snapshots.
struct ViewPatch {
    std::uint64_t latent_feature_id = 0;
    std::vector<float> pixels_hsv; // w*h*3, row-major
    int w = 0;
    int h = 0;
};

enum class LabelKind { Canonical, Synonym, Misrecognition, Clutter };

struct LabelProvenance {
    LabelKind kind = LabelKind::Canonical;
    bool modified = false;       // color-modifier prefix applied
    std::string base_label;      // canonical label of the source object
    std::uint64_t source_object = 0;
};

struct Detection {
    std::string raw_label;
    double bbox_left = 0.0, bbox_top = 0.0, bbox_w = 0.0, bbox_h = 0.0;
    Vec2 center_px;              // = bbox center
    double depth_at_center = 0.0;
    ViewPatch view;
    Vec3 world_point;
    LabelProvenance provenance;

    double bbox_area() const { return bbox_w * bbox_h; }
};

struct MemoryParams {
    double sigma_conf = 1.0;   // confidence decay scale
    double lambda_h = 0.5;     // scene-descriptor weight
    double lambda_x = 0.5;     // positional-descriptor weight
    double k_sigmoid = 8.0;    // 1/m, distance sharpness
    double tau_l = 0.2;        // similarity band lower bound
    double tau_u = 0.8;        // similarity band upper bound
    double tau_sg = 0.2;       // per-pair feature score threshold
    int tau_m = 60;            // minimum match count
    std::size_t image_capacity = 5;
};

struct SynonymSet {
    std::string goal;
    std::vector<std::string> synonyms;

    // goal first, then synonyms, no duplicates
    std::vector<std::string> all_patterns() const;
};

struct MemoryEntry {
    std::uint64_t id = 0;
    std::string label;
    std::deque<ViewPatch> images;
    Vec3 position;
    HsvHistogram scene;
    double confidence = 0.0;
    std::uint64_t insertion_seq = 0;
};

class FeatureMatcher {
public:
    virtual ~FeatureMatcher() = default;
    virtual int match_count(const ViewPatch& a, const ViewPatch& b, double tau_sg) const = 0;
};

// Lowercases, trims, collapses internal whitespace; rejects (nullopt)
// empty results and labels containing any stoplist keyword as a whole
// token.
std::optional<std::string> preprocess_label(std::string_view raw,
                                            const std::set<std::string>& stoplist);

// exp(-sigma * |center_px - image_center| * depth / bbox_area), in (0,1].
double compute_confidence(const Detection& det, Vec2 image_center, double sigma_conf);

double sigmoid(double z);

// lambda_h * Sim(H_a, H_b) - lambda_x * sigmoid(k * |X_a - X_b|).
double descriptor_similarity(const MemoryEntry& a, const MemoryEntry& b,
                             const MemoryParams& params);

// True iff some view pair matches with at least tau_m feature pairs.
bool match_instances(const std::deque<ViewPatch>& imgs_a, const std::deque<ViewPatch>& imgs_b,
                     const FeatureMatcher& matcher, const MemoryParams& params);

enum class UpsertOutcome { Inserted, Merged };

struct UpsertResult {
    UpsertOutcome outcome;
    std::uint64_t entry_id; // the inserted entry or the merge target
};

enum class QueryMode { WordBoundary, RawSubstring };

class MemoryModel {
public:
    UpsertResult upsert(MemoryEntry incoming, const FeatureMatcher& matcher,
                        const MemoryParams& params);

    // Entries whose label contains the goal or any synonym, ordered by
    // confidence descending then insertion order.
    std::vector<std::uint64_t> query(const SynonymSet& syn,
                                     QueryMode mode = QueryMode::WordBoundary) const;

    void remove(std::uint64_t id);
    const MemoryEntry& get(std::uint64_t id) const;
    const MemoryEntry* find(std::uint64_t id) const;

    const std::vector<MemoryEntry>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    void clear();

private:
    std::vector<MemoryEntry> entries_;
    std::uint64_t next_id_ = 1;
    std::uint64_t next_seq_ = 0;
};

} // namespace oval
