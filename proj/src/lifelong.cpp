#include "oval/lifelong.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "oval/serialize.hpp"

namespace oval {

std::vector<EpisodeGroup> sort_episodes(const std::vector<Episode>& episodes) {
    std::vector<std::string> scene_order;
    std::map<std::string, std::vector<EpisodeGroup>> by_scene;
    for (const auto& ep : episodes) {
        auto& groups = by_scene[ep.scene_id];
        if (groups.empty() &&
            std::find(scene_order.begin(), scene_order.end(), ep.scene_id) == scene_order.end())
            scene_order.push_back(ep.scene_id);
        EpisodeGroup* target = nullptr;
        for (auto& g : groups)
            if (std::abs(ep.floor_height - g.anchor_height) < 0.5) {
                target = &g;
                break;
            }
        if (!target) {
            groups.push_back({ep.scene_id, ep.floor_height, {}});
            target = &groups.back();
        }
        target->episodes.push_back(ep);
    }
    std::vector<EpisodeGroup> out;
    for (const auto& id : scene_order)
        for (auto& g : by_scene[id]) out.push_back(std::move(g));
    return out;
}

std::pair<double, double> compute_spl(const std::vector<EpisodeRecord>& records) {
    if (records.empty()) raise(Errc::EmptyReport, "no episode records");
    double successes = 0.0;
    double spl_sum = 0.0;
    for (const auto& r : records) {
        if (!r.success) continue;
        successes += 1.0;
        spl_sum += r.shortest_length / std::max(r.path_length, r.shortest_length);
    }
    double n = static_cast<double>(records.size());
    return {100.0 * successes / n, 100.0 * spl_sum / n};
}

const Scene& Dataset::scene(const std::string& id) const {
    for (const auto& s : scenes)
        if (s.id == id) return s;
    raise(Errc::NotFound, "scene not in dataset: " + id);
}

Dataset generate_lifelong_dataset(std::uint64_t seed, const DatasetSpec& spec,
                                  const Config& cfg) {
    Dataset ds;
    ds.seed = seed;
    std::vector<Episode> episodes;
    for (int si = 0; si < spec.num_scenes; ++si) {
        std::string scene_id = "scene-" + std::to_string(si);
        Scene scene;
        bool scene_ok = false;
        for (int attempt = 0; attempt < 8 && !scene_ok; ++attempt) {
            try {
                scene = generate_scene(
                    hash_key({seed, fnv1a("scene"), static_cast<std::uint64_t>(si),
                              static_cast<std::uint64_t>(attempt)}),
                    cfg.scene_spec, scene_id);
                scene_ok = true;
            } catch (const Error&) {
            }
        }
        if (!scene_ok) raise(Errc::GenerationFailed, "could not generate scene " + scene_id);

        auto labels = scene.labels_present();
        if (!spec.goal_catalog.empty()) {
            std::vector<std::string> allowed;
            for (const auto& l : labels)
                if (std::find(spec.goal_catalog.begin(), spec.goal_catalog.end(), l) !=
                    spec.goal_catalog.end())
                    allowed.push_back(l);
            labels = allowed;
        }
        if (labels.empty())
            raise(Errc::GenerationFailed, "no admissible goals in scene " + scene_id);

        DetRng rng(hash_key({seed, fnv1a("episodes"), static_cast<std::uint64_t>(si)}));
        for (int ei = 0; ei < spec.episodes_per_scene; ++ei) {
            const std::string& goal = labels[static_cast<std::size_t>(
                rng.uniform_int(0, static_cast<std::int64_t>(labels.size()) - 1))];
            auto goal_instances = scene.instances_of(goal);
            bool placed = false;
            for (int attempt = 0; attempt < 400 && !placed; ++attempt) {
                Vec2 p{rng.uniform(scene.bounds.x0 + 0.4, scene.bounds.x1 - 0.4),
                       rng.uniform(scene.bounds.y0 + 0.4, scene.bounds.y1 - 0.4)};
                if (collides(scene, p, cfg.kinematics.agent_radius + 0.02)) continue;
                bool on_object = false;
                for (const auto& o : scene.objects)
                    if (distance(p, o.position) <
                        o.nominal_size / 2.0 + cfg.kinematics.agent_radius + 0.05)
                        on_object = true;
                if (on_object) continue;
                bool far_enough = true;
                for (const auto& g : goal_instances)
                    if (distance(p, g) < cfg.eval.success_radius + 0.1) far_enough = false;
                if (!far_enough) continue;
                auto geo = geodesic_shortest_path(scene, p, goal_instances,
                                                  cfg.eval.success_radius,
                                                  cfg.eval.geodesic_raster,
                                                  cfg.kinematics.agent_radius);
                if (!geo || *geo <= 0.0) continue;
                double heading =
                    rng.uniform_int(0, 11) * (kTwoPi / 12.0); // grid of turn headings
                episodes.push_back(
                    {scene_id, make_pose(p.x, p.y, heading, scene.floor_height), goal,
                     scene.floor_height});
                placed = true;
            }
            if (!placed)
                raise(Errc::GenerationFailed, "could not sample a solvable episode start");
        }
        ds.scenes.push_back(std::move(scene));
    }
    auto groups = sort_episodes(episodes);
    for (const auto& g : groups)
        for (const auto& ep : g.episodes) ds.episodes.push_back(ep);
    return ds;
}

namespace {

void append_trajectory(TrajectorySink* sink, const Controller& ctl, int group_index,
                       int index_in_group) {
    if (!sink) return;
    for (const auto& rec : ctl.trajectory())
        sink->lines.push_back(step_record_to_json(rec, group_index, index_in_group));
    for (const auto& [step, scores] : ctl.decision_dumps())
        sink->lines.push_back(decision_dump_to_json(step, scores, group_index, index_in_group));
}

} // namespace

EvalReport run_lifelong(const Dataset& dataset, const Config& cfg, std::uint64_t run_seed,
                        TrajectorySink* trajectory) {
    EvalReport report;
    report.seed = run_seed;
    report.profile = cfg.profile;
    report.config_fingerprint = config_fingerprint(cfg);

    auto groups = sort_episodes(dataset.episodes);
    ControllerConfig ctl_cfg = cfg.controller_config();
    ctl_cfg.control.log_trajectory = cfg.control.log_trajectory || trajectory != nullptr;

    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
        const auto& group = groups[gi];
        const Scene& scene = dataset.scene(group.scene_id);

        OracleFeatureMatcher matcher(hash_key({run_seed, fnv1a("matcher")}));
        OracleVerifier verifier(scene, cfg.verifier_rates,
                                hash_key({run_seed, fnv1a("verifier"), fnv1a(scene.id)}));
        StaticSynonymProvider synonyms(cfg.synonyms);
        DetectorProfile profile = cfg.detector;
        profile.seed = hash_key({run_seed, fnv1a("detector")});

        Pose pose = group.episodes.front().start;
        Controller ctl(ctl_cfg, matcher, verifier, synonyms, pose,
                       hash_key({run_seed, fnv1a("controller"), static_cast<std::uint64_t>(gi)}));

        for (std::size_t ei = 0; ei < group.episodes.size(); ++ei) {
            const Episode& episode = group.episodes[ei];
            if (ei == 0) pose = episode.start; // group switch: fresh start pose

            EpisodeRecord rec;
            rec.scene_id = group.scene_id;
            rec.group_index = static_cast<int>(gi);
            rec.index_in_group = static_cast<int>(ei);
            rec.goal = episode.goal_label;

            ctl.begin_episode(episode.goal_label);
            rec.memory_start = ctl.memory().size();
            rec.unknown_start = ctl.grid().unknown_count();
            rec.explored_start = ctl.grid().explored_count();

            auto goal_instances = scene.instances_of(episode.goal_label);
            auto geo = geodesic_shortest_path(scene, pose.position(), goal_instances,
                                              cfg.eval.success_radius, cfg.eval.geodesic_raster,
                                              cfg.kinematics.agent_radius);
            rec.shortest_length = std::max(geo.value_or(cfg.eval.geodesic_raster),
                                           cfg.eval.geodesic_raster);

            double travelled = 0.0;
            bool voluntary_stop = false;
            while (ctl.step_count() < cfg.eval.max_steps) {
                Observation obs = sense(scene, pose, profile, cfg.sensor);
                Action act = ctl.step(obs);
                if (act == Action::Stop) {
                    voluntary_stop = ctl.stop_kind() == StopKind::Verified ||
                                     ctl.stop_kind() == StopKind::Unverified;
                    break;
                }
                Pose next = apply_action(scene, pose, act, cfg.kinematics);
                travelled += distance(next.position(), pose.position());
                pose = next;
            }

            rec.steps = ctl.step_count();
            rec.path_length = travelled;
            bool in_success_region = false;
            for (const auto& g : goal_instances)
                if (distance(pose.position(), g) <= cfg.eval.success_radius)
                    in_success_region = true;
            rec.success = voluntary_stop && in_success_region;
            switch (ctl.stop_kind()) {
                case StopKind::Verified:
                    rec.stop_reason = in_success_region ? "verified_stop" : "wrong_stop";
                    break;
                case StopKind::Unverified:
                    rec.stop_reason = in_success_region ? "unverified_stop" : "wrong_stop";
                    break;
                default: rec.stop_reason = "budget"; break;
            }
            rec.memory_end = ctl.memory().size();
            rec.unknown_end = ctl.grid().unknown_count();
            rec.explored_end = ctl.grid().explored_count();
            rec.frontier_selections = ctl.frontier_selections();
            rec.verify_attempts = ctl.verify_attempts();
            append_trajectory(trajectory, ctl, rec.group_index, rec.index_in_group);
            report.records.push_back(std::move(rec));
            // lifelong continuation: next episode starts from this end pose
        }
    }

    auto [sr, spl] = compute_spl(report.records);
    report.sr = sr;
    report.spl = spl;
    return report;
}

std::vector<AblationArm> run_ablation(const Dataset& dataset, const Config& base,
                                      const std::vector<std::uint64_t>& seeds,
                                      const std::vector<std::pair<std::string, Toggles>>& arms) {
    std::vector<AblationArm> out;
    for (const auto& [name, toggles] : arms) {
        AblationArm arm;
        arm.name = name;
        arm.toggles = toggles;
        Config cfg = apply_toggles(base, toggles);
        for (auto seed : seeds) arm.per_seed.push_back(run_lifelong(dataset, cfg, seed));
        for (const auto& rep : arm.per_seed)
            arm.report.records.insert(arm.report.records.end(), rep.records.begin(),
                                      rep.records.end());
        arm.report.seed = seeds.empty() ? 0 : seeds.front();
        arm.report.profile = cfg.profile;
        arm.report.config_fingerprint = config_fingerprint(cfg);
        auto [sr, spl] = compute_spl(arm.report.records);
        arm.report.sr = sr;
        arm.report.spl = spl;
        out.push_back(std::move(arm));
    }
    return out;
}

std::string ablation_table(const std::vector<AblationArm>& arms) {
    std::ostringstream os;
    os << "arm                          SR(%)   SPL(%)  episodes\n";
    for (const auto& arm : arms) {
        os << arm.name;
        for (std::size_t i = arm.name.size(); i < 28; ++i) os << ' ';
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%6.1f  %6.1f  %8zu\n", arm.report.sr, arm.report.spl,
                      arm.report.records.size());
        os << buf;
    }
    return os.str();
}

} // namespace oval
