#include "oval/sim_world.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <set>

namespace oval {

const Room* Scene::room_at(const Vec2& p) const {
    for (const auto& r : rooms)
        if (r.rect.contains(p)) return &r;
    return nullptr;
}

std::vector<Vec2> Scene::instances_of(const std::string& canonical) const {
    std::vector<Vec2> out;
    for (const auto& o : objects)
        if (o.canonical_label == canonical) out.push_back(o.position);
    return out;
}

std::vector<std::string> Scene::labels_present() const {
    std::vector<std::string> out;
    for (const auto& o : objects)
        if (std::find(out.begin(), out.end(), o.canonical_label) == out.end())
            out.push_back(o.canonical_label);
    return out;
}

namespace {

// Room base colors sit at histogram bin centers with all three channels
// distinct per palette slot, so same-room samples bin identically and
// different rooms do not overlap in any channel.
std::array<double, 3> palette_color(int slot) {
    int h = slot % kHistBins;
    int s = (5 + slot) % kHistBins;
    int v = (12 + 2 * slot) % kHistBins;
    auto center = [](int bin) { return (bin + 0.5) / kHistBins; };
    return {center(h), center(s), center(v)};
}

struct DoorCut {
    double lo = 0.0, hi = 0.0; // span along the shared edge
};

void push_wall_with_doors(std::vector<Wall>& walls, bool vertical, double fixed_lo,
                          double fixed_hi, double span_lo, double span_hi,
                          const std::vector<DoorCut>& cuts) {
    std::vector<std::pair<double, double>> segments{{span_lo, span_hi}};
    for (const auto& cut : cuts) {
        std::vector<std::pair<double, double>> next;
        for (auto [lo, hi] : segments) {
            if (cut.hi <= lo || cut.lo >= hi) {
                next.emplace_back(lo, hi);
                continue;
            }
            if (cut.lo > lo) next.emplace_back(lo, cut.lo);
            if (cut.hi < hi) next.emplace_back(cut.hi, hi);
        }
        segments = std::move(next);
    }
    for (auto [lo, hi] : segments) {
        if (hi - lo < 1e-6) continue;
        Wall w;
        w.rect = vertical ? Rect{fixed_lo, lo, fixed_hi, hi} : Rect{lo, fixed_lo, hi, fixed_hi};
        walls.push_back(w);
    }
}

} // namespace

Scene generate_scene(std::uint64_t seed, const SceneSpec& spec, const std::string& id) {
    DetRng rng(hash_key({seed, fnv1a("scene-gen")}));
    Scene scene;
    scene.id = id;
    scene.seed = seed;
    scene.floor_height = 0.0;

    const int rows = static_cast<int>(rng.uniform_int(spec.min_room_rows, spec.max_room_rows));
    const int cols = static_cast<int>(rng.uniform_int(spec.min_room_cols, spec.max_room_cols));
    const double rw = rng.uniform(spec.min_room_size, spec.max_room_size);
    const double rh = rng.uniform(spec.min_room_size, spec.max_room_size);
    const double wt = spec.wall_thickness;
    const double W = cols * rw;
    const double H = rows * rh;
    scene.bounds = {-wt, -wt, W + wt, H + wt};

    std::vector<std::string> types;
    for (const auto& [type, classes] : spec.catalogs) types.push_back(type);
    if (types.empty()) raise(Errc::GenerationFailed, "scene spec has no room catalogs");
    std::vector<std::string> type_order;
    while (static_cast<int>(type_order.size()) < rows * cols) {
        auto batch = types;
        rng.shuffle(batch);
        for (auto& t : batch) type_order.push_back(t);
    }

    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            Room room;
            room.rect = {c * rw, r * rh, (c + 1) * rw, (r + 1) * rh};
            room.type = type_order[static_cast<std::size_t>(r * cols + c)];
            room.base_hsv = palette_color(r * cols + c);
            scene.rooms.push_back(room);
        }

    // exterior shell
    scene.walls.push_back({{-wt, -wt, W + wt, 0.0}});
    scene.walls.push_back({{-wt, H, W + wt, H + wt}});
    scene.walls.push_back({{-wt, 0.0, 0.0, H}});
    scene.walls.push_back({{W, 0.0, W + wt, H}});

    // interior walls: door on every spanning-tree edge, extra doors by chance
    struct Edge {
        int a, b;
        bool vertical_wall; // wall between horizontally adjacent rooms
    };
    std::vector<Edge> edges;
    auto room_id = [&](int r, int c) { return r * cols + c; };
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            if (c + 1 < cols) edges.push_back({room_id(r, c), room_id(r, c + 1), true});
            if (r + 1 < rows) edges.push_back({room_id(r, c), room_id(r + 1, c), false});
        }
    std::vector<int> comp(static_cast<std::size_t>(rows) * cols);
    for (std::size_t i = 0; i < comp.size(); ++i) comp[i] = static_cast<int>(i);
    std::function<int(int)> find = [&](int x) { return comp[x] == x ? x : comp[x] = find(comp[x]); };
    auto shuffled = edges;
    rng.shuffle(shuffled);
    std::set<std::pair<int, int>> doored;
    for (const auto& e : shuffled) {
        if (find(e.a) != find(e.b)) {
            comp[find(e.a)] = find(e.b);
            doored.insert({e.a, e.b});
        } else if (rng.chance(spec.extra_door_prob)) {
            doored.insert({e.a, e.b});
        }
    }

    for (const auto& e : edges) {
        int ra = e.a / cols, ca = e.a % cols;
        std::vector<DoorCut> cuts;
        double span_lo, span_hi, fixed_lo, fixed_hi;
        if (e.vertical_wall) {
            double x = (ca + 1) * rw;
            fixed_lo = x - wt / 2.0;
            fixed_hi = x + wt / 2.0;
            span_lo = ra * rh;
            span_hi = (ra + 1) * rh;
        } else {
            double y = (ra + 1) * rh;
            fixed_lo = y - wt / 2.0;
            fixed_hi = y + wt / 2.0;
            span_lo = ca * rw;
            span_hi = (ca + 1) * rw;
        }
        if (doored.count({e.a, e.b})) {
            double dw = rng.uniform(spec.min_door_width, spec.max_door_width);
            double start = rng.uniform(span_lo + 0.3, span_hi - 0.3 - dw);
            cuts.push_back({start, start + dw});
        }
        push_wall_with_doors(scene.walls, e.vertical_wall, fixed_lo, fixed_hi, span_lo, span_hi,
                             cuts);
    }

    // objects
    std::uint64_t next_obj = 1;
    for (std::size_t ri = 0; ri < scene.rooms.size(); ++ri) {
        const Room& room = scene.rooms[ri];
        const auto& classes = spec.catalogs.at(room.type);
        int want = static_cast<int>(
            rng.uniform_int(spec.min_objects_per_room, spec.max_objects_per_room));
        // the catalog's first class anchors the room type (bathrooms get a
        // toilet, bedrooms a bed, ...); the rest is sampled
        std::vector<int> pick(classes.size());
        for (std::size_t i = 0; i < pick.size(); ++i) pick[i] = static_cast<int>(i);
        if (pick.size() > 1) {
            std::vector<int> rest(pick.begin() + 1, pick.end());
            rng.shuffle(rest);
            for (std::size_t i = 0; i < rest.size(); ++i) pick[i + 1] = rest[i];
        }
        int placed_count = 0;
        for (int k = 0; k < want; ++k) {
            const ObjectClass& cls = classes[static_cast<std::size_t>(
                pick[static_cast<std::size_t>(k) % pick.size()])];
            double margin = spec.object_clearance + cls.size / 2.0 + spec.wall_thickness;
            if (room.rect.width() <= 2 * margin || room.rect.height() <= 2 * margin)
                continue; // class too large for this room
            bool placed = false;
            for (int attempt = 0; attempt < 200 && !placed; ++attempt) {
                Vec2 p{rng.uniform(room.rect.x0 + margin, room.rect.x1 - margin),
                       rng.uniform(room.rect.y0 + margin, room.rect.y1 - margin)};
                bool clear = true;
                for (const auto& o : scene.objects) {
                    double min_gap = spec.object_clearance + (cls.size + o.nominal_size) / 2.0;
                    if (distance(p, o.position) < min_gap) {
                        clear = false;
                        break;
                    }
                }
                if (!clear) continue;
                ObjectInstance obj;
                obj.id = next_obj++;
                obj.canonical_label = cls.label;
                obj.position = p;
                obj.nominal_size = cls.size;
                obj.height = cls.height;
                obj.latent_feature_id = hash_key({seed, fnv1a("latent"), obj.id});
                scene.objects.push_back(obj);
                placed = true;
                ++placed_count;
            }
        }
        if (placed_count < spec.min_objects_per_room)
            raise(Errc::GenerationFailed, "room cannot hold the minimum object count");
    }
    return scene;
}

RayHit raycast(const Scene& scene, Vec2 origin, Vec2 dir, double max_range,
               double min_object_range) {
    RayHit best;
    best.t = max_range;
    for (std::size_t i = 0; i < scene.walls.size(); ++i) {
        double t = ray_rect_intersect(origin, dir, scene.walls[i].rect);
        if (t >= 0.0 && t < best.t) {
            best.t = t;
            best.kind = RayHit::WallHit;
            best.index = i;
            best.surface_height = scene.walls[i].surface_height;
        }
    }
    for (std::size_t i = 0; i < scene.objects.size(); ++i) {
        const auto& o = scene.objects[i];
        Vec2 rel = o.position - origin;
        double t_center = rel.dot(dir);
        if (t_center <= min_object_range || t_center >= best.t) continue;
        double perp_sq = rel.norm_sq() - t_center * t_center;
        double r = o.nominal_size / 2.0;
        if (perp_sq > r * r) continue;
        best.t = t_center;
        best.kind = RayHit::ObjectHit;
        best.index = i;
        best.surface_height = o.height;
    }
    if (best.kind == RayHit::None) best.t = max_range;
    return best;
}

bool collides(const Scene& scene, Vec2 p, double agent_radius) {
    for (const auto& w : scene.walls)
        if (w.rect.distance_to(p) < agent_radius) return true;
    return false;
}

bool line_of_sight_clear(const Scene& scene, Vec2 a, Vec2 b) {
    Vec2 d = b - a;
    double len = d.norm();
    if (len < 1e-12) return true;
    Vec2 dir{d.x / len, d.y / len};
    for (const auto& w : scene.walls) {
        double t = ray_rect_intersect(a, dir, w.rect);
        if (t >= 0.0 && t < len) return false;
    }
    return true;
}

namespace {

ViewPatch render_patch(const Scene& scene, const ObjectInstance& obj, std::uint64_t draw_key,
                       int patch_px) {
    ViewPatch v;
    v.latent_feature_id = obj.latent_feature_id;
    v.w = patch_px;
    v.h = patch_px;
    auto base = palette_color(static_cast<int>(obj.id % 16));
    v.pixels_hsv.reserve(static_cast<std::size_t>(patch_px) * patch_px * 3);
    for (int i = 0; i < patch_px * patch_px; ++i)
        for (int c = 0; c < 3; ++c) {
            double n = unit_from_hash(hash_key({draw_key, static_cast<std::uint64_t>(i),
                                                static_cast<std::uint64_t>(c)}));
            v.pixels_hsv.push_back(static_cast<float>(
                std::clamp(base[static_cast<std::size_t>(c)] + 0.04 * (n - 0.5), 0.0, 1.0)));
        }
    (void)scene;
    return v;
}

} // namespace

Observation sense(const Scene& scene, const Pose& pose, const DetectorProfile& profile,
                  const SensorParams& sensor) {
    if (!pose.finite()) raise(Errc::InvalidPose, "non-finite pose");
    if (collides(scene, pose.position(), 1e-6))
        raise(Errc::InvalidPose, "sensing pose inside an obstacle");

    Observation obs;
    obs.pose = pose;

    // scan
    obs.scan.fov = sensor.fov;
    obs.scan.max_range = sensor.max_range;
    obs.scan.bearings.reserve(static_cast<std::size_t>(sensor.num_rays));
    obs.scan.ranges.reserve(static_cast<std::size_t>(sensor.num_rays));
    obs.scan.heights.reserve(static_cast<std::size_t>(sensor.num_rays));
    for (int i = 0; i < sensor.num_rays; ++i) {
        double bearing = -sensor.fov / 2.0 + sensor.fov * i / (sensor.num_rays - 1);
        double ang = pose.heading + bearing;
        RayHit hit = raycast(scene, pose.position(), {std::cos(ang), std::sin(ang)},
                             sensor.max_range, sensor.min_object_range);
        obs.scan.bearings.push_back(bearing);
        obs.scan.ranges.push_back(hit.hit() ? hit.t : sensor.max_range);
        obs.scan.heights.push_back(hit.hit() ? hit.surface_height : 0.0);
    }

    const std::uint64_t pose_key =
        hash_key({profile.seed, fnv1a(scene.id), double_bits(pose.x), double_bits(pose.y),
                  double_bits(pose.heading)});

    // detections: objects in the field of view with a clear central ray
    const double cx = sensor.image_w / 2.0;
    const double cy = sensor.image_h / 2.0;
    const double focal = cx / std::tan(sensor.fov / 2.0);
    std::vector<std::string> canon = scene.labels_present();
    for (std::size_t i = 0; i < scene.objects.size(); ++i) {
        const auto& obj = scene.objects[i];
        Vec2 rel = obj.position - pose.position();
        double d = rel.norm();
        if (d < 1e-6 || d > sensor.detection_range) continue;
        double bearing = angle_diff(std::atan2(rel.y, rel.x), pose.heading);
        if (std::abs(bearing) > sensor.fov / 2.0) continue;
        RayHit hit = raycast(scene, pose.position(), {rel.x / d, rel.y / d}, sensor.max_range);
        if (hit.kind != RayHit::ObjectHit || hit.index != i) continue; // occluded

        Detection det;
        double col = cx - bearing / (sensor.fov / 2.0) * cx; // linear bearing-to-column map
        double side = std::clamp(obj.nominal_size / d * focal, 4.0, 480.0);
        det.bbox_w = side;
        det.bbox_h = side;
        det.bbox_left = col - side / 2.0;
        det.bbox_top = cy - side / 2.0;
        det.center_px = {col, cy};
        det.depth_at_center = d;
        det.world_point = {pose.x + d * std::cos(pose.heading + bearing),
                           pose.y + d * std::sin(pose.heading + bearing),
                           scene.floor_height};

        const std::uint64_t obj_key = hash_key({pose_key, obj.id});
        std::string label = obj.canonical_label;
        det.provenance.kind = LabelKind::Canonical;
        det.provenance.base_label = obj.canonical_label;
        det.provenance.source_object = obj.id;
        double offset = std::abs(col - cx);
        double quality = std::exp(-profile.quality_sigma * offset * d / (side * side));
        double misrec_p = profile.misrecognition_rate * (1.0 - quality);
        if (unit_from_hash(hash_key({obj_key, fnv1a("misrec")})) < misrec_p &&
            canon.size() > 1) {
            std::vector<std::string> others;
            for (const auto& c : canon)
                if (c != obj.canonical_label) others.push_back(c);
            label = others[static_cast<std::size_t>(int_from_hash(
                hash_key({obj_key, fnv1a("misrec-pick")}), 0,
                static_cast<std::int64_t>(others.size()) - 1))];
            det.provenance.kind = LabelKind::Misrecognition;
        } else {
            auto pool = profile.synonym_pools.find(obj.canonical_label);
            if (pool != profile.synonym_pools.end() && !pool->second.empty() &&
                unit_from_hash(hash_key({obj_key, fnv1a("syn")})) < profile.synonym_prob) {
                label = pool->second[static_cast<std::size_t>(int_from_hash(
                    hash_key({obj_key, fnv1a("syn-pick")}), 0,
                    static_cast<std::int64_t>(pool->second.size()) - 1))];
                det.provenance.kind = LabelKind::Synonym;
            }
        }
        if (!profile.modifiers.empty() &&
            unit_from_hash(hash_key({obj_key, fnv1a("mod")})) < profile.modifier_prob) {
            const auto& m = profile.modifiers[static_cast<std::size_t>(int_from_hash(
                hash_key({obj_key, fnv1a("mod-pick")}), 0,
                static_cast<std::int64_t>(profile.modifiers.size()) - 1))];
            label = m + " " + label;
            det.provenance.modified = true;
        }
        det.raw_label = label;
        det.view = render_patch(scene, obj, hash_key({obj_key, fnv1a("patch")}), sensor.patch_px);
        obs.detections.push_back(std::move(det));
    }

    // clutter emissions ("wall", "various objects", ...)
    if (!profile.clutter_labels.empty() &&
        unit_from_hash(hash_key({pose_key, fnv1a("clutter")})) < profile.clutter_rate) {
        Detection det;
        const auto& label = profile.clutter_labels[static_cast<std::size_t>(int_from_hash(
            hash_key({pose_key, fnv1a("clutter-pick")}), 0,
            static_cast<std::int64_t>(profile.clutter_labels.size()) - 1))];
        double bearing = (unit_from_hash(hash_key({pose_key, fnv1a("clutter-bear")})) - 0.5) *
                         sensor.fov * 0.8;
        double d = 0.5 + unit_from_hash(hash_key({pose_key, fnv1a("clutter-depth")})) *
                             (sensor.max_range - 0.5);
        double col = cx - bearing / (sensor.fov / 2.0) * cx;
        double side = 40.0 + 80.0 * unit_from_hash(hash_key({pose_key, fnv1a("clutter-size")}));
        det.raw_label = label;
        det.bbox_w = side;
        det.bbox_h = side;
        det.bbox_left = col - side / 2.0;
        det.bbox_top = cy - side / 2.0;
        det.center_px = {col, cy};
        det.depth_at_center = d;
        det.world_point = {pose.x + d * std::cos(pose.heading + bearing),
                           pose.y + d * std::sin(pose.heading + bearing),
                           scene.floor_height};
        det.provenance.kind = LabelKind::Clutter;
        det.view.latent_feature_id = hash_key({pose_key, fnv1a("clutter-latent")});
        det.view.w = det.view.h = sensor.patch_px;
        det.view.pixels_hsv.assign(
            static_cast<std::size_t>(sensor.patch_px) * sensor.patch_px * 3, 0.5f);
        obs.detections.push_back(std::move(det));
    }

    // room color sample at the agent position
    const Room* room = scene.room_at(pose.position());
    std::array<double, 3> base = room ? room->base_hsv : std::array<double, 3>{0.5, 0.5, 0.5};
    std::vector<std::array<double, 3>> samples;
    samples.reserve(static_cast<std::size_t>(profile.scene_sample_count));
    for (int i = 0; i < profile.scene_sample_count; ++i) {
        std::array<double, 3> s;
        for (int c = 0; c < 3; ++c) {
            double n = unit_from_hash(hash_key({pose_key, fnv1a("room-sample"),
                                                static_cast<std::uint64_t>(i),
                                                static_cast<std::uint64_t>(c)}));
            s[static_cast<std::size_t>(c)] = std::clamp(
                base[static_cast<std::size_t>(c)] + profile.hsv_noise * (2.0 * n - 1.0), 0.0,
                1.0);
        }
        samples.push_back(s);
    }
    obs.scene_sample = HsvHistogram::from_samples(samples);
    return obs;
}

Pose apply_action(const Scene& scene, const Pose& pose, Action action, const Kinematics& kin) {
    Pose next = pose;
    switch (action) {
        case Action::MoveForward: {
            Vec2 cand{pose.x + kin.forward_step * std::cos(pose.heading),
                      pose.y + kin.forward_step * std::sin(pose.heading)};
            if (!collides(scene, cand, kin.agent_radius)) {
                next.x = cand.x;
                next.y = cand.y;
            }
            break;
        }
        case Action::TurnLeft:
            next.heading = wrap_angle(pose.heading + kin.turn_step);
            break;
        case Action::TurnRight:
            next.heading = wrap_angle(pose.heading - kin.turn_step);
            break;
        case Action::Stop:
        case Action::LookUp:
        case Action::LookDown:
            break; // pitch is a no-op in a planar world
    }
    return next;
}

int OracleFeatureMatcher::match_count(const ViewPatch& a, const ViewPatch& b,
                                      double /*tau_sg*/) const {
    std::uint64_t lo = std::min(a.latent_feature_id, b.latent_feature_id);
    std::uint64_t hi = std::max(a.latent_feature_id, b.latent_feature_id);
    std::uint64_t h = hash_key({seed_, lo, hi});
    if (a.latent_feature_id == b.latent_feature_id)
        return static_cast<int>(int_from_hash(h, 80, 140));
    return static_cast<int>(int_from_hash(h, 0, 30));
}

bool OracleVerifier::goal_present(const std::vector<Pose>& panorama,
                                  const std::string& goal) const {
    for (const auto& obj : scene_->objects) {
        if (obj.canonical_label != goal) continue;
        for (const auto& p : panorama) {
            if (distance(p.position(), obj.position) > 1.0) continue;
            if (line_of_sight_clear(*scene_, p.position(), obj.position)) return true;
        }
    }
    return false;
}

double OracleVerifier::score(const std::vector<Pose>& panorama, const std::string& goal) const {
    std::uint64_t key = hash_key({seed_, fnv1a(goal)});
    for (const auto& p : panorama)
        key = hash_key({key, double_bits(p.x), double_bits(p.y), double_bits(p.heading)});
    bool present = goal_present(panorama, goal);
    double branch = unit_from_hash(hash_key({key, fnv1a("branch")}));
    double u = unit_from_hash(hash_key({key, fnv1a("value")}));
    bool high;
    if (present)
        high = branch < rates_.true_pos;
    else
        high = branch >= 1.0 - rates_.false_pos;
    return high ? 0.7 + 0.3 * u : 0.3 * u;
}

SynonymSet StaticSynonymProvider::lookup(const std::string& goal) const {
    SynonymSet out;
    out.goal = goal;
    auto it = table_.find(goal);
    if (it != table_.end()) out.synonyms = it->second;
    return out;
}

std::optional<double> geodesic_shortest_path(const Scene& scene, Vec2 start,
                                             const std::vector<Vec2>& goals,
                                             double success_radius, double raster,
                                             double inflation) {
    if (goals.empty()) return std::nullopt;

    const int w = static_cast<int>(std::ceil((scene.bounds.x1 - scene.bounds.x0) / raster));
    const int h = static_cast<int>(std::ceil((scene.bounds.y1 - scene.bounds.y0) / raster));
    auto cell_center = [&](int r, int c) {
        return Vec2{scene.bounds.x0 + (c + 0.5) * raster, scene.bounds.y0 + (r + 0.5) * raster};
    };
    auto idx = [&](int r, int c) { return static_cast<std::size_t>(r) * w + c; };

    std::vector<std::uint8_t> blocked(static_cast<std::size_t>(w) * h, 0);
    for (int r = 0; r < h; ++r)
        for (int c = 0; c < w; ++c) {
            Vec2 p = cell_center(r, c);
            for (const auto& wall : scene.walls)
                if (wall.rect.distance_to(p) < inflation) {
                    blocked[idx(r, c)] = 1;
                    break;
                }
        }

    std::vector<std::uint8_t> is_goal(static_cast<std::size_t>(w) * h, 0);
    for (int r = 0; r < h; ++r)
        for (int c = 0; c < w; ++c) {
            if (blocked[idx(r, c)]) continue;
            Vec2 p = cell_center(r, c);
            for (const auto& g : goals)
                if (distance(p, g) <= success_radius) {
                    is_goal[idx(r, c)] = 1;
                    break;
                }
        }

    int sc = static_cast<int>(std::floor((start.x - scene.bounds.x0) / raster));
    int sr = static_cast<int>(std::floor((start.y - scene.bounds.y0) / raster));
    if (sr < 0 || sr >= h || sc < 0 || sc >= w) return std::nullopt;
    if (is_goal[idx(sr, sc)]) return 0.0;

    struct Node {
        double g;
        int r, c;
        bool operator>(const Node& o) const {
            if (g != o.g) return g > o.g;
            if (r != o.r) return r > o.r;
            return c > o.c;
        }
    };
    std::priority_queue<Node, std::vector<Node>, std::greater<Node>> open;
    std::vector<double> dist(static_cast<std::size_t>(w) * h, 1e18);
    dist[idx(sr, sc)] = 0.0;
    open.push({0.0, sr, sc});
    const double kSqrt2 = std::sqrt(2.0);
    const int dr8[] = {-1, -1, -1, 0, 0, 1, 1, 1};
    const int dc8[] = {-1, 0, 1, -1, 1, -1, 0, 1};
    while (!open.empty()) {
        Node cur = open.top();
        open.pop();
        std::size_t ci = idx(cur.r, cur.c);
        if (cur.g > dist[ci] + 1e-12) continue;
        if (is_goal[ci]) return cur.g;
        for (int k = 0; k < 8; ++k) {
            int nr = cur.r + dr8[k];
            int nc = cur.c + dc8[k];
            if (nr < 0 || nr >= h || nc < 0 || nc >= w) continue;
            std::size_t ni = idx(nr, nc);
            if (blocked[ni]) continue;
            if (dr8[k] != 0 && dc8[k] != 0 &&
                (blocked[idx(cur.r, nc)] || blocked[idx(nr, cur.c)]))
                continue;
            double step = (dr8[k] != 0 && dc8[k] != 0) ? kSqrt2 * raster : raster;
            if (cur.g + step < dist[ni] - 1e-12) {
                dist[ni] = cur.g + step;
                open.push({dist[ni], nr, nc});
            }
        }
    }
    return std::nullopt;
}

} // namespace oval
