#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "oval/geometry.hpp"
#include "oval/grid_map.hpp"
#include "oval/histogram.hpp"
#include "oval/memory_model.hpp"
#include "oval/rng.hpp"

namespace oval {

struct Room {
    Rect rect;
    std::array<double, 3> base_hsv{0.5, 0.5, 0.5};
    std::string type; // bathroom / kitchen / bedroom / living room
};

struct Wall {
    Rect rect;
    double surface_height = 0.9; // world z reported for scan hits
};

// Objects are sensed as "poles": a ray within size/2 of the center hits
// at the center distance, so detection depth, the scan return, and the
// unprojected world point all agree. They do not collide with the agent.
struct ObjectInstance {
    std::uint64_t id = 0;
    std::string canonical_label;
    Vec2 position;
    double nominal_size = 0.3; // characteristic diameter, m
    double height = 0.9;       // world z reported for scan hits
    std::uint64_t latent_feature_id = 0;
};

struct Scene {
    std::string id;
    double floor_height = 0.0;
    Rect bounds; // outer extent including exterior walls
    std::vector<Room> rooms;
    std::vector<Wall> walls;
    std::vector<ObjectInstance> objects;
    std::uint64_t seed = 0;

    const Room* room_at(const Vec2& p) const;
    std::vector<Vec2> instances_of(const std::string& canonical) const;
    std::vector<std::string> labels_present() const;
};

struct ObjectClass {
    std::string label;
    double size = 0.3;
    double height = 0.9;
};

struct SceneSpec {
    int min_room_rows = 2, max_room_rows = 3;
    int min_room_cols = 3, max_room_cols = 4;
    double min_room_size = 3.4, max_room_size = 4.2; // m per side
    double wall_thickness = 0.1;
    double min_door_width = 0.7, max_door_width = 1.0;
    double extra_door_prob = 0.35;
    int min_objects_per_room = 2, max_objects_per_room = 3;
    double object_clearance = 0.3;
    std::map<std::string, std::vector<ObjectClass>> catalogs; // room type -> classes
};

struct DetectorProfile {
    std::map<std::string, std::vector<std::string>> synonym_pools;
    std::vector<std::string> modifiers;
    double modifier_prob = 0.15;
    double synonym_prob = 0.25;
    std::vector<std::string> clutter_labels;
    double clutter_rate = 0.3;
    // Base mislabel probability. The effective rate per view is
    // misrecognition_rate * (1 - q) with q the view quality
    // exp(-quality_sigma * offset * depth / bbox_area): centered close-up
    // views are rarely mislabeled, marginal ones often.
    double misrecognition_rate = 0.3;
    double quality_sigma = 1.0;
    double hsv_noise = 0.02; // per-channel amplitude of scene color noise
    int scene_sample_count = 64;
    std::uint64_t seed = 0;
};

struct SensorParams {
    double fov = kPi / 2.0;
    int num_rays = 181;
    double max_range = 4.5;
    int image_w = 640;
    int image_h = 480;
    int patch_px = 4;            // view patch side
    double detection_range = 4.5; // m
    // Objects closer than this are under the sensor and produce no scan
    // return (they still produce detections).
    double min_object_range = 0.35;
};

struct Kinematics {
    double forward_step = 0.25;
    double turn_step = kPi / 6.0; // 30 degrees
    double agent_radius = 0.18;
};

struct Observation {
    Pose pose;
    DepthScan scan;
    std::vector<Detection> detections;
    HsvHistogram scene_sample;
};

struct RayHit {
    double t = -1.0;
    enum Kind { None, WallHit, ObjectHit } kind = None;
    std::size_t index = 0;       // wall or object index
    double surface_height = 0.0;

    bool hit() const { return kind != None; }
};

// Seeded procedural layout: a grid of rooms joined by door gaps, objects
// placed with clearance, free space connected by construction.
Scene generate_scene(std::uint64_t seed, const SceneSpec& spec, const std::string& id);

// Object hits closer than min_object_range along the ray are ignored
// (walls always hit).
RayHit raycast(const Scene& scene, Vec2 origin, Vec2 dir, double max_range,
               double min_object_range = 0.0);

// Ray-cast scan plus synthesized detections and a room-color sample. All
// draws are keyed on (profile seed, pose bits, object id), so equal
// inputs produce equal observations.
Observation sense(const Scene& scene, const Pose& pose, const DetectorProfile& profile,
                  const SensorParams& sensor);

enum class Action { Stop, MoveForward, TurnLeft, TurnRight, LookUp, LookDown };

Pose apply_action(const Scene& scene, const Pose& pose, Action action, const Kinematics& kin);

bool collides(const Scene& scene, Vec2 p, double agent_radius);

class OracleFeatureMatcher : public FeatureMatcher {
public:
    explicit OracleFeatureMatcher(std::uint64_t seed) : seed_(seed) {}

    // Equal latent ids draw from [80,140], different ids from [0,30];
    // keyed by the unordered id pair, so match(a,b) == match(b,a).
    int match_count(const ViewPatch& a, const ViewPatch& b, double tau_sg) const override;

private:
    std::uint64_t seed_;
};

struct VerifierRates {
    double true_pos = 0.95;
    double false_pos = 0.02;
};

class Verifier {
public:
    virtual ~Verifier() = default;
    virtual double score(const std::vector<Pose>& panorama, const std::string& goal) const = 0;
};

// Goal presence = some instance of the goal class within 1 m of a
// panorama pose with wall-unobstructed line of sight. Present draws land
// in [0.7,1.0] with probability true_pos (else [0,0.3]); absent draws in
// [0,0.3] with probability 1-false_pos. Keyed by (seed, goal, poses).
class OracleVerifier : public Verifier {
public:
    OracleVerifier(const Scene& scene, VerifierRates rates, std::uint64_t seed)
        : scene_(&scene), rates_(rates), seed_(seed) {}

    double score(const std::vector<Pose>& panorama, const std::string& goal) const override;

    bool goal_present(const std::vector<Pose>& panorama, const std::string& goal) const;

private:
    const Scene* scene_;
    VerifierRates rates_;
    std::uint64_t seed_;
};

class SynonymProvider {
public:
    virtual ~SynonymProvider() = default;
    virtual SynonymSet lookup(const std::string& goal) const = 0;
};

class StaticSynonymProvider : public SynonymProvider {
public:
    StaticSynonymProvider() = default;
    explicit StaticSynonymProvider(std::map<std::string, std::vector<std::string>> table)
        : table_(std::move(table)) {}

    SynonymSet lookup(const std::string& goal) const override;

private:
    std::map<std::string, std::vector<std::string>> table_;
};

// Shortest collision-free path length (m) from start to within
// success_radius of any goal position, on a fine raster with walls
// inflated by the agent radius. nullopt when unreachable.
std::optional<double> geodesic_shortest_path(const Scene& scene, Vec2 start,
                                             const std::vector<Vec2>& goals,
                                             double success_radius = 1.0,
                                             double raster = 0.05,
                                             double inflation = 0.18);

bool line_of_sight_clear(const Scene& scene, Vec2 a, Vec2 b);

} // namespace oval
