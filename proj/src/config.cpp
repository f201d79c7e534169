#include "oval/config.hpp"

#include "oval/rng.hpp"

namespace oval {

std::set<std::string> builtin_stoplist() {
    return {"wall", "various", "objects", "floor", "ceiling", "surface", "doorway"};
}

std::map<std::string, std::vector<std::string>> builtin_synonyms() {
    return {
        {"sofa", {"couch", "settee"}},
        {"tv", {"television"}},
        {"refrigerator", {"fridge"}},
        {"bathtub", {"tub"}},
        {"wardrobe", {"closet"}},
        {"nightstand", {"bedside table"}},
        {"armchair", {"easy chair"}},
        {"oven", {"stove"}},
    };
}

std::map<std::string, std::vector<ObjectClass>> builtin_catalogs() {
    return {
        {"bathroom",
         {{"toilet", 0.5, 0.45},
          {"sink", 0.45, 0.85},
          {"shower", 0.9, 1.2},
          {"bathtub", 1.0, 0.55},
          {"towel rack", 0.4, 1.1},
          {"mirror", 0.5, 1.3}}},
        {"kitchen",
         {{"refrigerator", 0.8, 1.4},
          {"oven", 0.6, 0.9},
          {"sink", 0.45, 0.85},
          {"kettle", 0.2, 0.3},
          {"cupboard", 0.6, 1.3},
          {"microwave", 0.45, 0.4}}},
        {"bedroom",
         {{"bed", 1.1, 0.6},
          {"wardrobe", 0.9, 1.45},
          {"nightstand", 0.4, 0.55},
          {"lamp", 0.3, 1.2},
          {"dresser", 0.8, 0.9}}},
        {"living room",
         {{"sofa", 1.1, 0.8},
          {"tv", 0.9, 1.0},
          {"coffee table", 0.7, 0.5},
          {"plant", 0.35, 0.9},
          {"armchair", 0.8, 0.9},
          {"chair", 0.45, 0.9}}},
        {"office",
         {{"desk", 1.0, 0.75},
          {"chair", 0.45, 0.9},
          {"bookshelf", 0.9, 1.4},
          {"lamp", 0.3, 1.2},
          {"computer", 0.4, 0.5}}},
        {"dining room",
         {{"dining table", 1.0, 0.75},
          {"chair", 0.45, 0.9},
          {"cabinet", 0.7, 1.3},
          {"vase", 0.25, 0.5}}},
        {"laundry room",
         {{"washing machine", 0.7, 0.9},
          {"laundry basket", 0.4, 0.4},
          {"shelf", 0.8, 1.35},
          {"mop", 0.2, 1.1}}},
        {"hallway",
         {{"coat rack", 0.4, 1.45},
          {"shoe rack", 0.5, 0.4},
          {"mirror", 0.5, 1.3},
          {"bench", 0.8, 0.5}}},
    };
}

CooccurrenceTable builtin_cooccurrence() {
    CooccurrenceTable t;
    for (const auto& [type, classes] : builtin_catalogs()) {
        auto& members = t.groups[type];
        for (const auto& c : classes) members.push_back(c.label);
    }
    // every label is attracted to the groups it belongs to, plus a few
    // mild cross-room hints
    for (const auto& [group, members] : t.groups)
        for (const auto& m : members) t.affinity[m][group] = 0.9;
    t.affinity["sink"]["bathroom"] = 0.9;
    t.affinity["sink"]["kitchen"] = 0.9;
    t.affinity["lamp"]["living room"] = 0.3;
    t.affinity["chair"]["kitchen"] = 0.3;
    t.affinity["plant"]["bedroom"] = 0.2;
    return t;
}

namespace {

DetectorProfile default_detector() {
    DetectorProfile p;
    p.synonym_pools = builtin_synonyms();
    p.modifiers = {"green", "red", "blue", "white", "black", "wooden", "small", "large"};
    p.modifier_prob = 0.15;
    p.synonym_prob = 0.25;
    p.clutter_labels = {"wall", "various objects", "floor", "ceiling"};
    p.clutter_rate = 0.3;
    p.misrecognition_rate = 0.3;
    p.hsv_noise = 0.02;
    p.scene_sample_count = 64;
    return p;
}

} // namespace

Config default_config() {
    Config cfg;
    cfg.profile = "desk";
    cfg.scene_spec.catalogs = builtin_catalogs();
    cfg.detector = default_detector();
    cfg.stoplist = builtin_stoplist();
    cfg.synonyms = builtin_synonyms();
    cfg.cooccurrence = builtin_cooccurrence();
    return cfg;
}

Config paper_defaults_config() {
    Config cfg = default_config();
    cfg.profile = "paper-defaults";
    cfg.explore.a_d = 1.0;
    cfg.explore.a_s = 0.5;
    cfg.explore.a_f = 1.0;
    cfg.explore.sigma_d = 1e6;
    cfg.explore.sigma_d = 1e6;
    cfg.explore.sigma_s = 1e6;
    cfg.explore.sigma_f = 1e6;
    cfg.explore.d_th = 10.0;
    return cfg;
}

Config config_for_profile(const std::string& name) {
    if (name == "paper-defaults") return paper_defaults_config();
    if (name == "desk" || name.empty()) return default_config();
    raise(Errc::InvalidCall, "unknown profile: " + name);
}

Config apply_toggles(Config cfg, const Toggles& t) {
    cfg.toggles = t;
    if (!t.footprint) cfg.explore.a_f = 0.0;
    if (!t.distance) cfg.explore.a_d = 0.0;
    if (!t.semantics) cfg.explore.a_s = 0.0;
    cfg.control.verify_stop = t.verify_stop;
    cfg.control.lifelong_memory = t.memory_model;
    cfg.control.use_probability_map = t.probability_map;
    return cfg;
}

ControllerConfig Config::controller_config() const {
    ControllerConfig c;
    c.mapping = mapping;
    c.dbscan = dbscan;
    c.explore = explore;
    c.memory = memory;
    c.verify = verify;
    c.planner = planner;
    c.control = control;
    c.control.max_steps = eval.max_steps;
    c.stoplist = stoplist;
    c.cooccurrence = cooccurrence;
    c.image_center = {sensor.image_w / 2.0, sensor.image_h / 2.0};
    return c;
}

} // namespace oval
