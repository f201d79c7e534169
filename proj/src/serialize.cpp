#include "oval/serialize.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "oval/rng.hpp"

namespace oval {

using nlohmann::json;

namespace {

json vec2_j(const Vec2& v) { return json::array({v.x, v.y}); }
json vec3_j(const Vec3& v) { return json::array({v.x, v.y, v.z}); }
json rect_j(const Rect& r) { return json::array({r.x0, r.y0, r.x1, r.y1}); }
Rect rect_from(const json& j) { return {j[0], j[1], j[2], j[3]}; }

json pose_j(const Pose& p) { return json::array({p.x, p.y, p.heading, p.floor_height}); }
Pose pose_from(const json& j) { return {j[0], j[1], j[2], j[3]}; }

} // namespace

std::string scene_to_json(const Scene& scene) {
    json j;
    j["format"] = "oval-scene";
    j["version"] = 1;
    j["id"] = scene.id;
    j["floor_height"] = scene.floor_height;
    j["seed"] = scene.seed;
    j["bounds"] = rect_j(scene.bounds);
    j["rooms"] = json::array();
    for (const auto& r : scene.rooms)
        j["rooms"].push_back({{"rect", rect_j(r.rect)},
                              {"color_hsv", json::array({r.base_hsv[0], r.base_hsv[1],
                                                         r.base_hsv[2]})},
                              {"type", r.type}});
    j["walls"] = json::array();
    for (const auto& w : scene.walls)
        j["walls"].push_back({{"rect", rect_j(w.rect)}, {"surface_height", w.surface_height}});
    j["objects"] = json::array();
    for (const auto& o : scene.objects)
        j["objects"].push_back({{"id", o.id},
                                {"label", o.canonical_label},
                                {"position", vec2_j(o.position)},
                                {"size", o.nominal_size},
                                {"height", o.height},
                                {"latent", o.latent_feature_id}});
    return j.dump(2) + "\n";
}

Scene scene_from_json(const std::string& text) {
    json j = json::parse(text);
    if (j.value("format", "") != "oval-scene") raise(Errc::ParseError, "not an oval-scene file");
    Scene s;
    s.id = j["id"];
    s.floor_height = j["floor_height"];
    s.seed = j["seed"];
    s.bounds = rect_from(j["bounds"]);
    for (const auto& rj : j["rooms"]) {
        Room r;
        r.rect = rect_from(rj["rect"]);
        r.base_hsv = {rj["color_hsv"][0], rj["color_hsv"][1], rj["color_hsv"][2]};
        r.type = rj["type"];
        s.rooms.push_back(r);
    }
    for (const auto& wj : j["walls"]) {
        Wall w;
        w.rect = rect_from(wj["rect"]);
        w.surface_height = wj["surface_height"];
        s.walls.push_back(w);
    }
    for (const auto& oj : j["objects"]) {
        ObjectInstance o;
        o.id = oj["id"];
        o.canonical_label = oj["label"];
        o.position = {oj["position"][0], oj["position"][1]};
        o.nominal_size = oj["size"];
        o.height = oj["height"];
        o.latent_feature_id = oj["latent"];
        s.objects.push_back(o);
    }
    return s;
}

std::string dataset_to_json(const Dataset& ds) {
    json j;
    j["format"] = "oval-dataset";
    j["version"] = 1;
    j["seed"] = ds.seed;
    j["scenes"] = json::array();
    for (const auto& s : ds.scenes) j["scenes"].push_back(json::parse(scene_to_json(s)));
    j["episodes"] = json::array();
    for (const auto& e : ds.episodes)
        j["episodes"].push_back({{"scene_id", e.scene_id},
                                 {"start", pose_j(e.start)},
                                 {"goal", e.goal_label},
                                 {"floor_height", e.floor_height}});
    return j.dump(2) + "\n";
}

Dataset dataset_from_json(const std::string& text) {
    json j = json::parse(text);
    if (j.value("format", "") != "oval-dataset")
        raise(Errc::ParseError, "not an oval-dataset file");
    Dataset ds;
    ds.seed = j["seed"];
    for (const auto& sj : j["scenes"]) ds.scenes.push_back(scene_from_json(sj.dump()));
    for (const auto& ej : j["episodes"])
        ds.episodes.push_back(
            {ej["scene_id"], pose_from(ej["start"]), ej["goal"], ej["floor_height"]});
    return ds;
}

namespace {

json record_j(const EpisodeRecord& r) {
    return {{"scene_id", r.scene_id},
            {"group", r.group_index},
            {"index_in_group", r.index_in_group},
            {"goal", r.goal},
            {"success", r.success},
            {"steps", r.steps},
            {"stop_reason", r.stop_reason},
            {"path_length", r.path_length},
            {"shortest_length", r.shortest_length},
            {"memory_start", r.memory_start},
            {"memory_end", r.memory_end},
            {"unknown_start", r.unknown_start},
            {"unknown_end", r.unknown_end},
            {"explored_start", r.explored_start},
            {"explored_end", r.explored_end},
            {"frontier_selections", r.frontier_selections},
            {"verify_attempts", r.verify_attempts}};
}

EpisodeRecord record_from(const json& j) {
    EpisodeRecord r;
    r.scene_id = j["scene_id"];
    r.group_index = j["group"];
    r.index_in_group = j["index_in_group"];
    r.goal = j["goal"];
    r.success = j["success"];
    r.steps = j["steps"];
    r.stop_reason = j["stop_reason"];
    r.path_length = j["path_length"];
    r.shortest_length = j["shortest_length"];
    r.memory_start = j["memory_start"];
    r.memory_end = j["memory_end"];
    r.unknown_start = j["unknown_start"];
    r.unknown_end = j["unknown_end"];
    r.explored_start = j["explored_start"];
    r.explored_end = j["explored_end"];
    r.frontier_selections = j["frontier_selections"];
    r.verify_attempts = j["verify_attempts"];
    return r;
}

} // namespace

std::string report_to_json(const EvalReport& report) {
    json j;
    j["format"] = "oval-report";
    j["version"] = 1;
    j["config_fingerprint"] = report.config_fingerprint;
    j["seed"] = report.seed;
    j["profile"] = report.profile;
    j["aggregates"] = {{"sr", report.sr},
                       {"spl", report.spl},
                       {"episodes", report.records.size()}};
    j["episodes"] = json::array();
    for (const auto& r : report.records) j["episodes"].push_back(record_j(r));
    return j.dump(2) + "\n";
}

EvalReport report_from_json(const std::string& text) {
    json j = json::parse(text);
    if (j.value("format", "") != "oval-report")
        raise(Errc::ParseError, "not an oval-report file");
    EvalReport rep;
    rep.config_fingerprint = j["config_fingerprint"];
    rep.seed = j["seed"];
    rep.profile = j["profile"];
    rep.sr = j["aggregates"]["sr"];
    rep.spl = j["aggregates"]["spl"];
    for (const auto& rj : j["episodes"]) rep.records.push_back(record_from(rj));
    return rep;
}

std::string report_to_csv(const EvalReport& report) {
    std::ostringstream os;
    os << "scene_id,group,index_in_group,goal,success,steps,stop_reason,path_length,"
          "shortest_length,memory_start,memory_end,unknown_start,unknown_end,"
          "frontier_selections,verify_attempts\n";
    for (const auto& r : report.records) {
        char buf[128];
        std::snprintf(buf, sizeof(buf), "%.6f,%.6f", r.path_length, r.shortest_length);
        os << r.scene_id << ',' << r.group_index << ',' << r.index_in_group << ",\"" << r.goal
           << "\"," << (r.success ? 1 : 0) << ',' << r.steps << ',' << r.stop_reason << ','
           << buf << ',' << r.memory_start << ',' << r.memory_end << ',' << r.unknown_start
           << ',' << r.unknown_end << ',' << r.frontier_selections << ',' << r.verify_attempts
           << '\n';
    }
    return os.str();
}

std::string memory_snapshot_to_json(const MemoryModel& memory) {
    json j;
    j["format"] = "oval-memory";
    j["version"] = 1;
    j["entries"] = json::array();
    for (const auto& e : memory.entries()) {
        json views = json::array();
        for (const auto& v : e.images) views.push_back({{"latent", v.latent_feature_id}});
        json hist;
        hist["h"] = e.scene.channels[0];
        hist["s"] = e.scene.channels[1];
        hist["v"] = e.scene.channels[2];
        j["entries"].push_back({{"id", e.id},
                                {"label", e.label},
                                {"position", vec3_j(e.position)},
                                {"confidence", e.confidence},
                                {"scene_hist", hist},
                                {"views", views}});
    }
    return j.dump(2) + "\n";
}

std::string grid_dump_to_json(const OccupancyGrid& grid) {
    json j;
    j["format"] = "oval-grid";
    j["version"] = 1;
    j["origin"] = vec2_j(grid.origin());
    j["resolution"] = grid.resolution();
    j["width"] = grid.width();
    j["height"] = grid.height();
    j["cells_rle"] = grid_to_rle(grid);
    return j.dump(2) + "\n";
}

namespace {

json toggles_j(const Toggles& t) {
    return {{"verify_stop", t.verify_stop},   {"memory_model", t.memory_model},
            {"probability_map", t.probability_map}, {"footprint", t.footprint},
            {"distance", t.distance},         {"semantics", t.semantics}};
}

} // namespace

std::string config_to_json(const Config& cfg) {
    json j;
    j["format"] = "oval-config";
    j["version"] = 1;
    j["profile"] = cfg.profile;
    j["sensor"] = {{"fov", cfg.sensor.fov},
                   {"num_rays", cfg.sensor.num_rays},
                   {"max_range", cfg.sensor.max_range},
                   {"image_w", cfg.sensor.image_w},
                   {"image_h", cfg.sensor.image_h}};
    j["kinematics"] = {{"forward_step", cfg.kinematics.forward_step},
                       {"turn_step", cfg.kinematics.turn_step},
                       {"agent_radius", cfg.kinematics.agent_radius}};
    j["mapping"] = {{"resolution", cfg.mapping.resolution},
                    {"height_band", json::array({cfg.mapping.height_band.lo,
                                                 cfg.mapping.height_band.hi})},
                    {"initial_cells", cfg.mapping.initial_cells}};
    j["dbscan"] = {{"eps_cells", cfg.dbscan.eps_cells}, {"min_pts", cfg.dbscan.min_pts}};
    j["explore"] = {{"a_d", cfg.explore.a_d},
                    {"a_s", cfg.explore.a_s},
                    {"a_f", cfg.explore.a_f},
                    {"sigma_d", cfg.explore.sigma_d},
                    {"sigma_s", cfg.explore.sigma_s},
                    {"sigma_f", cfg.explore.sigma_f},
                    {"d_th", cfg.explore.d_th},
                    {"kernel", cfg.explore.kernel == KernelMode::Unnormalized
                                   ? "unnormalized"
                                   : "normalized_density"},
                    {"selection", cfg.explore.selection == SelectionMode::Softmax
                                      ? "softmax"
                                      : (cfg.explore.selection == SelectionMode::NearestFrontier
                                             ? "nearest"
                                             : "argmax")},
                    {"softmax_temp", cfg.explore.softmax_temp}};
    j["memory"] = {{"sigma_conf", cfg.memory.sigma_conf},
                   {"lambda_h", cfg.memory.lambda_h},
                   {"lambda_x", cfg.memory.lambda_x},
                   {"k_sigmoid", cfg.memory.k_sigmoid},
                   {"tau_l", cfg.memory.tau_l},
                   {"tau_u", cfg.memory.tau_u},
                   {"tau_sg", cfg.memory.tau_sg},
                   {"tau_m", cfg.memory.tau_m},
                   {"image_capacity", cfg.memory.image_capacity}};
    j["verify"] = {{"omega", cfg.verify.omega},
                   {"threshold", cfg.verify.threshold},
                   {"panorama_views", cfg.verify.panorama_views}};
    j["planner"] = {{"inflation_radius", cfg.planner.inflation_radius},
                    {"approach_radius", cfg.planner.approach_radius}};
    j["control"] = {{"heading_tolerance", cfg.control.heading_tolerance},
                    {"waypoint_arrival", cfg.control.waypoint_arrival},
                    {"lookaround_turns", cfg.control.lookaround_turns},
                    {"blocked_replan_after", cfg.control.blocked_replan_after},
                    {"blocked_abandon_after", cfg.control.blocked_abandon_after},
                    {"random_walk_radius", cfg.control.random_walk_radius}};
    j["eval"] = {{"max_steps", cfg.eval.max_steps},
                 {"success_radius", cfg.eval.success_radius},
                 {"geodesic_raster", cfg.eval.geodesic_raster}};
    j["detector"] = {{"modifier_prob", cfg.detector.modifier_prob},
                     {"synonym_prob", cfg.detector.synonym_prob},
                     {"clutter_rate", cfg.detector.clutter_rate},
                     {"misrecognition_rate", cfg.detector.misrecognition_rate},
                     {"hsv_noise", cfg.detector.hsv_noise},
                     {"scene_sample_count", cfg.detector.scene_sample_count},
                     {"modifiers", cfg.detector.modifiers},
                     {"clutter_labels", cfg.detector.clutter_labels},
                     {"synonym_pools", cfg.detector.synonym_pools}};
    j["verifier_rates"] = {{"true_pos", cfg.verifier_rates.true_pos},
                           {"false_pos", cfg.verifier_rates.false_pos}};
    j["stoplist"] = cfg.stoplist;
    j["synonyms"] = cfg.synonyms;
    json groups = json::object();
    for (const auto& [name, members] : cfg.cooccurrence.groups) groups[name] = members;
    json affinity = json::object();
    for (const auto& [goal, m] : cfg.cooccurrence.affinity) affinity[goal] = m;
    j["cooccurrence"] = {{"groups", groups}, {"affinity", affinity}};
    j["toggles"] = toggles_j(cfg.toggles);
    return j.dump(2) + "\n";
}

void config_update_from_json(Config& cfg, const std::string& text) {
    json j = json::parse(text);
    if (j.contains("profile")) cfg = config_for_profile(j["profile"].get<std::string>());
    auto num = [&](const char* section, const char* key, double& out) {
        if (j.contains(section) && j[section].contains(key)) out = j[section][key];
    };
    auto inum = [&](const char* section, const char* key, int& out) {
        if (j.contains(section) && j[section].contains(key)) out = j[section][key];
    };
    num("sensor", "fov", cfg.sensor.fov);
    inum("sensor", "num_rays", cfg.sensor.num_rays);
    num("sensor", "max_range", cfg.sensor.max_range);
    inum("sensor", "image_w", cfg.sensor.image_w);
    inum("sensor", "image_h", cfg.sensor.image_h);
    num("kinematics", "forward_step", cfg.kinematics.forward_step);
    num("kinematics", "turn_step", cfg.kinematics.turn_step);
    num("kinematics", "agent_radius", cfg.kinematics.agent_radius);
    num("mapping", "resolution", cfg.mapping.resolution);
    inum("mapping", "initial_cells", cfg.mapping.initial_cells);
    if (j.contains("mapping") && j["mapping"].contains("height_band")) {
        cfg.mapping.height_band.lo = j["mapping"]["height_band"][0];
        cfg.mapping.height_band.hi = j["mapping"]["height_band"][1];
    }
    num("dbscan", "eps_cells", cfg.dbscan.eps_cells);
    inum("dbscan", "min_pts", cfg.dbscan.min_pts);
    num("explore", "a_d", cfg.explore.a_d);
    num("explore", "a_s", cfg.explore.a_s);
    num("explore", "a_f", cfg.explore.a_f);
    num("explore", "sigma_d", cfg.explore.sigma_d);
    num("explore", "sigma_s", cfg.explore.sigma_s);
    num("explore", "sigma_f", cfg.explore.sigma_f);
    num("explore", "d_th", cfg.explore.d_th);
    num("explore", "softmax_temp", cfg.explore.softmax_temp);
    if (j.contains("explore") && j["explore"].contains("kernel"))
        cfg.explore.kernel = j["explore"]["kernel"] == "normalized_density"
                                 ? KernelMode::NormalizedDensity
                                 : KernelMode::Unnormalized;
    if (j.contains("explore") && j["explore"].contains("selection")) {
        std::string s = j["explore"]["selection"];
        cfg.explore.selection = s == "softmax" ? SelectionMode::Softmax
                                : s == "nearest" ? SelectionMode::NearestFrontier
                                                 : SelectionMode::Argmax;
    }
    num("memory", "sigma_conf", cfg.memory.sigma_conf);
    num("memory", "lambda_h", cfg.memory.lambda_h);
    num("memory", "lambda_x", cfg.memory.lambda_x);
    num("memory", "k_sigmoid", cfg.memory.k_sigmoid);
    num("memory", "tau_l", cfg.memory.tau_l);
    num("memory", "tau_u", cfg.memory.tau_u);
    num("memory", "tau_sg", cfg.memory.tau_sg);
    inum("memory", "tau_m", cfg.memory.tau_m);
    if (j.contains("memory") && j["memory"].contains("image_capacity"))
        cfg.memory.image_capacity = j["memory"]["image_capacity"];
    num("verify", "omega", cfg.verify.omega);
    num("verify", "threshold", cfg.verify.threshold);
    inum("verify", "panorama_views", cfg.verify.panorama_views);
    num("planner", "inflation_radius", cfg.planner.inflation_radius);
    num("planner", "approach_radius", cfg.planner.approach_radius);
    inum("eval", "max_steps", cfg.eval.max_steps);
    num("eval", "success_radius", cfg.eval.success_radius);
    num("eval", "geodesic_raster", cfg.eval.geodesic_raster);
    num("detector", "modifier_prob", cfg.detector.modifier_prob);
    num("detector", "synonym_prob", cfg.detector.synonym_prob);
    num("detector", "clutter_rate", cfg.detector.clutter_rate);
    num("detector", "misrecognition_rate", cfg.detector.misrecognition_rate);
    num("detector", "hsv_noise", cfg.detector.hsv_noise);
    num("verifier_rates", "true_pos", cfg.verifier_rates.true_pos);
    num("verifier_rates", "false_pos", cfg.verifier_rates.false_pos);
    if (j.contains("stoplist"))
        cfg.stoplist = std::set<std::string>(j["stoplist"].begin(), j["stoplist"].end());
    if (j.contains("synonyms"))
        cfg.synonyms =
            j["synonyms"].get<std::map<std::string, std::vector<std::string>>>();
    if (j.contains("cooccurrence")) {
        cfg.cooccurrence.groups = j["cooccurrence"]["groups"]
                                      .get<std::map<std::string, std::vector<std::string>>>();
        cfg.cooccurrence.affinity =
            j["cooccurrence"]["affinity"]
                .get<std::map<std::string, std::map<std::string, double>>>();
    }
    if (j.contains("toggles")) {
        const auto& t = j["toggles"];
        Toggles toggles = cfg.toggles;
        if (t.contains("verify_stop")) toggles.verify_stop = t["verify_stop"];
        if (t.contains("memory_model")) toggles.memory_model = t["memory_model"];
        if (t.contains("probability_map")) toggles.probability_map = t["probability_map"];
        if (t.contains("footprint")) toggles.footprint = t["footprint"];
        if (t.contains("distance")) toggles.distance = t["distance"];
        if (t.contains("semantics")) toggles.semantics = t["semantics"];
        cfg = apply_toggles(cfg, toggles);
    }
}

std::uint64_t config_fingerprint(const Config& cfg) { return fnv1a(config_to_json(cfg)); }

std::string step_record_to_json(const StepRecord& rec, int group_index, int index_in_group) {
    json j;
    j["type"] = "step";
    j["group"] = group_index;
    j["episode"] = index_in_group;
    j["step"] = rec.step;
    j["pose"] = pose_j(rec.pose);
    j["action"] = action_name(rec.action);
    j["phase"] = phase_name(rec.phase);
    j["memory_size"] = rec.memory_size;
    if (rec.chosen_frontier) {
        const auto& f = *rec.chosen_frontier;
        j["frontier"] = {{"cell", json::array({f.cell.row, f.cell.col})},
                         {"world", vec2_j(f.world)},
                         {"o_d", f.o_d},
                         {"o_s", f.o_s},
                         {"o_f", f.o_f},
                         {"total", f.total()}};
    }
    return j.dump();
}

std::string decision_dump_to_json(int step, const std::vector<FrontierScore>& scores,
                                  int group_index, int index_in_group) {
    json j;
    j["type"] = "probability_map";
    j["group"] = group_index;
    j["episode"] = index_in_group;
    j["step"] = step;
    j["candidates"] = json::array();
    for (const auto& s : scores)
        j["candidates"].push_back({{"cell", json::array({s.waypoint.cell.row,
                                                         s.waypoint.cell.col})},
                                   {"world", vec2_j(s.waypoint.world)},
                                   {"o_d", s.o_d},
                                   {"o_s", s.o_s},
                                   {"o_f", s.o_f},
                                   {"total", s.total()}});
    return j.dump();
}

std::string ablation_to_json(const std::vector<AblationArm>& arms) {
    json j;
    j["format"] = "oval-ablation";
    j["version"] = 1;
    j["arms"] = json::array();
    for (const auto& arm : arms) {
        json per_seed = json::array();
        for (const auto& rep : arm.per_seed)
            per_seed.push_back(
                {{"seed", rep.seed}, {"sr", rep.sr}, {"spl", rep.spl}});
        j["arms"].push_back({{"name", arm.name},
                             {"toggles", toggles_j(arm.toggles)},
                             {"sr", arm.report.sr},
                             {"spl", arm.report.spl},
                             {"episodes", arm.report.records.size()},
                             {"per_seed", per_seed}});
    }
    return j.dump(2) + "\n";
}

std::string curves_csv(const EvalReport& report) {
    std::map<int, std::vector<const EpisodeRecord*>> by_index;
    for (const auto& r : report.records) by_index[r.index_in_group].push_back(&r);
    std::ostringstream os;
    os << "targets,sr,spl,episodes\n";
    for (const auto& [idx, recs] : by_index) {
        double succ = 0.0, spl = 0.0;
        for (const auto* r : recs) {
            if (!r->success) continue;
            succ += 1.0;
            spl += r->shortest_length / std::max(r->path_length, r->shortest_length);
        }
        double n = static_cast<double>(recs.size());
        char buf[96];
        std::snprintf(buf, sizeof(buf), "%d,%.4f,%.4f,%zu\n", idx + 1, 100.0 * succ / n,
                      100.0 * spl / n, recs.size());
        os << buf;
    }
    return os.str();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(Errc::NotFound, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) raise(Errc::InvalidCall, "cannot write " + path);
    out << content;
}

} // namespace oval
