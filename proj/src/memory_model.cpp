#include "oval/memory_model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "oval/kmp.hpp"

namespace oval {

std::vector<std::string> SynonymSet::all_patterns() const {
    std::vector<std::string> out;
    out.push_back(goal);
    for (const auto& s : synonyms)
        if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
    return out;
}

std::optional<std::string> preprocess_label(std::string_view raw,
                                            const std::set<std::string>& stoplist) {
    std::string norm;
    norm.reserve(raw.size());
    bool pending_space = false;
    for (char ch : raw) {
        if (std::isspace(static_cast<unsigned char>(ch))) {
            if (!norm.empty()) pending_space = true;
            continue;
        }
        if (pending_space) {
            norm.push_back(' ');
            pending_space = false;
        }
        norm.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    }
    if (norm.empty()) return std::nullopt;

    std::istringstream tokens(norm);
    std::string tok;
    while (tokens >> tok)
        if (stoplist.count(tok)) return std::nullopt;
    for (const auto& stop : stoplist)
        if (stop.find(' ') != std::string::npos && kmp_contains_word(norm, stop))
            return std::nullopt;
    return norm;
}

double compute_confidence(const Detection& det, Vec2 image_center, double sigma_conf) {
    double area = det.bbox_area();
    if (!(area > 0.0) || !(det.depth_at_center > 0.0))
        raise(Errc::InvalidDetection, "detection needs positive bbox area and depth");
    double offset = distance(det.center_px, image_center);
    double c = std::exp(-sigma_conf * offset * det.depth_at_center / area);
    return std::min(c, 1.0);
}

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

double descriptor_similarity(const MemoryEntry& a, const MemoryEntry& b,
                             const MemoryParams& params) {
    double sim = histogram_intersection(a.scene, b.scene);
    double dist = distance(a.position, b.position);
    return params.lambda_h * sim - params.lambda_x * sigmoid(params.k_sigmoid * dist);
}

bool match_instances(const std::deque<ViewPatch>& imgs_a, const std::deque<ViewPatch>& imgs_b,
                     const FeatureMatcher& matcher, const MemoryParams& params) {
    if (imgs_a.empty() || imgs_b.empty())
        raise(Errc::InvalidState, "match_instances requires non-empty image buffers");
    int best = 0;
    for (const auto& va : imgs_a)
        for (const auto& vb : imgs_b)
            best = std::max(best, matcher.match_count(va, vb, params.tau_sg));
    return best >= params.tau_m;
}

UpsertResult MemoryModel::upsert(MemoryEntry incoming, const FeatureMatcher& matcher,
                                 const MemoryParams& params) {
    struct Candidate {
        std::size_t index;
        double s_m;
    };
    std::vector<Candidate> candidates;
    for (std::size_t i = 0; i < entries_.size(); ++i)
        if (entries_[i].label == incoming.label)
            candidates.push_back({i, descriptor_similarity(entries_[i], incoming, params)});

    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const Candidate& a, const Candidate& b) { return a.s_m > b.s_m; });

    const MemoryEntry* confirmed = nullptr;
    std::size_t confirmed_idx = 0;
    for (const auto& cand : candidates) {
        if (cand.s_m < params.tau_l) continue; // clearly a different instance
        bool same;
        if (cand.s_m > params.tau_u) {
            same = true; // unambiguous from descriptors alone
        } else {
            same = match_instances(entries_[cand.index].images, incoming.images, matcher, params);
        }
        if (same) {
            confirmed = &entries_[cand.index];
            confirmed_idx = cand.index;
            break;
        }
    }

    if (!confirmed) {
        incoming.id = next_id_++;
        incoming.insertion_seq = next_seq_++;
        while (incoming.images.size() > params.image_capacity) incoming.images.pop_front();
        entries_.push_back(std::move(incoming));
        return {UpsertOutcome::Inserted, entries_.back().id};
    }

    MemoryEntry& target = entries_[confirmed_idx];
    if (target.confidence <= incoming.confidence) {
        target.position = incoming.position;
        target.scene = incoming.scene;
        target.confidence = incoming.confidence;
    }
    for (auto& v : incoming.images) target.images.push_back(std::move(v));
    while (target.images.size() > params.image_capacity) target.images.pop_front();
    return {UpsertOutcome::Merged, target.id};
}

std::vector<std::uint64_t> MemoryModel::query(const SynonymSet& syn, QueryMode mode) const {
    auto patterns = syn.all_patterns();
    std::vector<const MemoryEntry*> hits;
    for (const auto& e : entries_) {
        for (const auto& p : patterns) {
            if (p.empty()) continue;
            bool match = mode == QueryMode::WordBoundary ? kmp_contains_word(e.label, p)
                                                         : kmp_contains(e.label, p);
            if (match) {
                hits.push_back(&e);
                break;
            }
        }
    }
    std::stable_sort(hits.begin(), hits.end(), [](const MemoryEntry* a, const MemoryEntry* b) {
        if (a->confidence != b->confidence) return a->confidence > b->confidence;
        return a->insertion_seq < b->insertion_seq;
    });
    std::vector<std::uint64_t> out;
    out.reserve(hits.size());
    for (const auto* e : hits) out.push_back(e->id);
    return out;
}

void MemoryModel::remove(std::uint64_t id) {
    auto it = std::find_if(entries_.begin(), entries_.end(),
                           [&](const MemoryEntry& e) { return e.id == id; });
    if (it == entries_.end()) raise(Errc::NotFound, "memory entry not found");
    entries_.erase(it);
}

const MemoryEntry* MemoryModel::find(std::uint64_t id) const {
    auto it = std::find_if(entries_.begin(), entries_.end(),
                           [&](const MemoryEntry& e) { return e.id == id; });
    return it == entries_.end() ? nullptr : &*it;
}

const MemoryEntry& MemoryModel::get(std::uint64_t id) const {
    const MemoryEntry* e = find(id);
    if (!e) raise(Errc::NotFound, "memory entry not found");
    return *e;
}

void MemoryModel::clear() { entries_.clear(); }

} // namespace oval
