#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "oval/controller.hpp"
#include "oval/explorer.hpp"
#include "oval/memory_model.hpp"
#include "oval/sim_world.hpp"

namespace oval {

struct EvalParams {
    int max_steps = 500;
    double success_radius = 1.0; // m
    double geodesic_raster = 0.05;
};

struct Toggles {
    bool verify_stop = true;
    bool memory_model = true;
    bool probability_map = true;
    bool footprint = true;
    bool distance = true;
    bool semantics = true;
};

struct Config {
    std::string profile = "desk";
    SensorParams sensor;
    Kinematics kinematics;
    MappingParams mapping;
    DbscanParams dbscan;
    ExplorationParams explore;
    MemoryParams memory;
    VerifyParams verify;
    PlannerParams planner;
    ControllerParams control;
    EvalParams eval;
    SceneSpec scene_spec;
    DetectorProfile detector;
    VerifierRates verifier_rates;
    std::set<std::string> stoplist;
    std::map<std::string, std::vector<std::string>> synonyms;
    CooccurrenceTable cooccurrence;
    Toggles toggles;

    ControllerConfig controller_config() const;
};

// Desk-scale defaults; the benchmark configuration.
Config default_config();

// Same structure with the published parameter magnitudes for the
// exploration sigmas (1e6); selection behavior is otherwise identical.
Config paper_defaults_config();

Config config_for_profile(const std::string& name);

// Zeroes amplitudes / flips controller switches according to the toggles.
Config apply_toggles(Config cfg, const Toggles& t);

std::uint64_t config_fingerprint(const Config& cfg);

// Builtin tables (also shipped under configs/ for file-based override).
std::set<std::string> builtin_stoplist();
std::map<std::string, std::vector<std::string>> builtin_synonyms();
CooccurrenceTable builtin_cooccurrence();
std::map<std::string, std::vector<ObjectClass>> builtin_catalogs();

} // namespace oval
