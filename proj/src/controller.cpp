#include "oval/controller.hpp"

#include <algorithm>
#include <cmath>

namespace oval {

const char* phase_name(Phase p) {
    switch (p) {
        case Phase::QueryMemory: return "query_memory";
        case Phase::NavigateToGoal: return "navigate_to_goal";
        case Phase::Verifying: return "verifying";
        case Phase::NavigateToFrontier: return "navigate_to_frontier";
        case Phase::LookingAround: return "looking_around";
        case Phase::RandomWalking: return "random_walking";
    }
    return "?";
}

const char* action_name(Action a) {
    switch (a) {
        case Action::Stop: return "stop";
        case Action::MoveForward: return "move_forward";
        case Action::TurnLeft: return "turn_left";
        case Action::TurnRight: return "turn_right";
        case Action::LookUp: return "look_up";
        case Action::LookDown: return "look_down";
    }
    return "?";
}

std::uint64_t select_best_candidate(const std::vector<std::uint64_t>& candidates,
                                    const MemoryModel& memory, const OccupancyGrid& grid,
                                    const Pose& pose, const PlannerParams& planner) {
    if (candidates.empty()) raise(Errc::InvalidCall, "no candidates to select from");

    double best_conf = -1.0;
    for (auto id : candidates) best_conf = std::max(best_conf, memory.get(id).confidence);
    std::vector<std::uint64_t> tied;
    for (auto id : candidates)
        if (memory.get(id).confidence == best_conf) tied.push_back(id);
    if (tied.size() == 1) return tied.front();

    // candidates arrive in (confidence desc, insertion) order, so the first
    // shortest-path winner also respects the insertion-order tie-break
    std::uint64_t best_id = tied.front();
    double best_len = 1e18;
    for (auto id : tied) {
        auto path = plan_path(grid, pose, memory.get(id).position.xy(), planner);
        double len = path ? path_length(*path) : 1e18;
        if (len < best_len - 1e-12) {
            best_len = len;
            best_id = id;
        }
    }
    return best_id;
}

std::vector<Action> look_around_script(int turns) {
    return std::vector<Action>(static_cast<std::size_t>(turns), Action::TurnLeft);
}

std::optional<Vec2> random_walk_target(const OccupancyGrid& grid, const Pose& pose, DetRng& rng,
                                       const PlannerParams& planner, double radius) {
    double max_radius =
        std::hypot(grid.width() * grid.resolution(), grid.height() * grid.resolution());
    for (double r = radius; r <= 2.0 * max_radius; r *= 2.0) {
        std::vector<CellIndex> free_cells;
        Vec2 org = grid.origin();
        double res = grid.resolution();
        int c0 = std::max(0, static_cast<int>(std::floor((pose.x - r - org.x) / res)));
        int c1 = std::min(grid.width() - 1,
                          static_cast<int>(std::floor((pose.x + r - org.x) / res)));
        int r0 = std::max(0, static_cast<int>(std::floor((pose.y - r - org.y) / res)));
        int r1 = std::min(grid.height() - 1,
                          static_cast<int>(std::floor((pose.y + r - org.y) / res)));
        for (int row = r0; row <= r1; ++row)
            for (int col = c0; col <= c1; ++col) {
                if (grid.at(row, col) != CellState::Free) continue;
                if (distance(grid.cell_to_world({row, col}), pose.position()) > r) continue;
                free_cells.push_back({row, col});
            }
        int tries = std::min<int>(20, static_cast<int>(free_cells.size()));
        for (int k = 0; k < tries; ++k) {
            auto pick = static_cast<std::size_t>(
                rng.uniform_int(0, static_cast<std::int64_t>(free_cells.size()) - 1));
            Vec2 target = grid.cell_to_world(free_cells[pick]);
            if (plan_path(grid, pose, target, planner)) return target;
        }
    }
    return std::nullopt;
}

std::optional<Action> follow_step(const Pose& pose, std::deque<Vec2>& waypoints,
                                  const ControllerParams& params) {
    // consume the chain of waypoints inside the lookahead and steer at the
    // furthest of them; the final waypoint still requires the arrival radius
    while (waypoints.size() > 1 &&
           distance(pose.position(), waypoints.front()) <= params.lookahead)
        waypoints.pop_front();
    if (waypoints.size() == 1) {
        double d = distance(pose.position(), waypoints.front());
        bool reached = d <= params.waypoint_arrival;
        if (!reached && d <= params.lookahead) {
            // overshot the endpoint: close enough once it falls behind us
            double bearing = std::atan2(waypoints.front().y - pose.y,
                                        waypoints.front().x - pose.x);
            reached = std::abs(angle_diff(bearing, pose.heading)) > kPi / 2.0;
        }
        if (reached) waypoints.pop_front();
    }
    if (waypoints.empty()) return std::nullopt;

    Vec2 target = waypoints.front();
    double bearing = std::atan2(target.y - pose.y, target.x - pose.x);
    double err = angle_diff(bearing, pose.heading);
    if (std::abs(err) > params.heading_tolerance)
        return err > 0.0 ? Action::TurnLeft : Action::TurnRight;
    return Action::MoveForward;
}

std::optional<MemoryEntry> detection_to_entry(const Detection& det,
                                              const HsvHistogram& scene_sample,
                                              const std::set<std::string>& stoplist,
                                              const MemoryParams& params, Vec2 image_center) {
    auto label = preprocess_label(det.raw_label, stoplist);
    if (!label) return std::nullopt;
    MemoryEntry e;
    e.label = *label;
    e.images.push_back(det.view);
    e.position = det.world_point;
    e.scene = scene_sample;
    e.confidence = compute_confidence(det, image_center, params.sigma_conf);
    return e;
}

Controller::Controller(const ControllerConfig& config, const FeatureMatcher& matcher,
                       const Verifier& verifier, const SynonymProvider& synonyms, Pose start,
                       std::uint64_t seed)
    : cfg_(config),
      matcher_(&matcher),
      verifier_(&verifier),
      synonyms_(&synonyms),
      rng_(seed),
      grid_(OccupancyGrid::centered(start.position(), config.mapping.resolution,
                                    config.mapping.initial_cells)),
      footprint_(start.position(), config.mapping.resolution, config.mapping.initial_cells,
                 config.explore.sigma_f, config.explore.kernel) {}

void Controller::begin_episode(const std::string& goal) {
    static const std::set<std::string> kNoStops;
    goal_ = preprocess_label(goal, kNoStops).value_or(goal);
    syn_ = synonyms_->lookup(goal_);
    tried_goals_.clear();
    unreachable_goals_.clear();
    unreachable_counts_.clear();
    phase_ = Phase::LookingAround;
    lookaround_left_ = cfg_.control.lookaround_turns;
    path_.clear();
    panorama_.clear();
    panorama_left_ = 0;
    target_entry_ = 0;
    step_count_ = 0;
    stopped_ = false;
    stop_kind_ = StopKind::None;
    blocked_streak_ = 0;
    leg_steps_ = 0;
    awaiting_move_ = false;
    last_position_.reset();
    frontier_selections_ = 0;
    verify_attempts_ = 0;
    trajectory_.clear();
    decision_dumps_.clear();
    last_decision_.reset();
    if (!cfg_.control.lifelong_memory) memory_.clear();
}

std::vector<LabeledPoint> Controller::memory_points() const {
    std::vector<LabeledPoint> out;
    out.reserve(memory_.size());
    for (const auto& e : memory_.entries()) out.push_back({e.label, e.position});
    return out;
}

void Controller::mark_unreachable(std::uint64_t entry_id) {
    if (++unreachable_counts_[entry_id] >= cfg_.control.unreachable_promote_after)
        tried_goals_.insert(entry_id);
    else
        unreachable_goals_.insert(entry_id);
}

void Controller::ingest(const Observation& obs) {
    integrate_observation(grid_, obs.pose, obs.scan, cfg_.mapping.height_band);
    footprint_.record(obs.pose.position());
    for (const auto& det : obs.detections) {
        auto entry = detection_to_entry(det, obs.scene_sample, cfg_.stoplist, cfg_.memory,
                                        cfg_.image_center);
        if (entry) memory_.upsert(std::move(*entry), *matcher_, cfg_.memory);
    }
}

Action Controller::emit(Action a, const Observation& obs) {
    if (a == Action::MoveForward) {
        awaiting_move_ = true;
        last_position_ = obs.pose.position();
    }
    if (cfg_.control.log_trajectory) {
        StepRecord rec;
        rec.step = step_count_;
        rec.pose = obs.pose;
        rec.action = a;
        rec.phase = phase_;
        rec.memory_size = memory_.size();
        rec.chosen_frontier = last_decision_;
        trajectory_.push_back(std::move(rec));
    }
    last_decision_.reset();
    return a;
}

bool Controller::resolve_query_phase(const Pose& pose) {
    // memory first
    auto hits = memory_.query(syn_);
    std::vector<std::uint64_t> candidates;
    for (auto id : hits)
        if (!tried_goals_.count(id) && !unreachable_goals_.count(id)) candidates.push_back(id);
    while (!candidates.empty()) {
        std::uint64_t best =
            select_best_candidate(candidates, memory_, grid_, pose, cfg_.planner);
        Vec2 target = memory_.get(best).position.xy();
        auto plan = plan_path(grid_, pose, target, cfg_.planner);
        if (!plan && cfg_.control.relaxed_goal_approach > cfg_.planner.approach_radius) {
            PlannerParams relaxed = cfg_.planner;
            relaxed.approach_radius = cfg_.control.relaxed_goal_approach;
            plan = plan_path(grid_, pose, target, relaxed);
        }
        if (plan) {
            path_.assign(plan->begin(), plan->end());
            nav_target_ = target;
            target_entry_ = best;
            blocked_streak_ = 0;
            leg_steps_ = 0;
            phase_ = Phase::NavigateToGoal;
            return true;
        }
        mark_unreachable(best);
        candidates.erase(std::remove(candidates.begin(), candidates.end(), best),
                         candidates.end());
    }

    // frontier exploration
    auto frontier_cells = detect_frontiers(grid_);
    auto waypoints =
        cluster_frontiers(grid_, frontier_cells, cfg_.dbscan.eps_cells, cfg_.dbscan.min_pts);
    ExplorationParams explore = cfg_.explore;
    if (!cfg_.control.use_probability_map) explore.selection = SelectionMode::NearestFrontier;
    auto mem_points = memory_points();
    while (true) {
        std::vector<FrontierScore> dump;
        auto chosen = choose_frontier(waypoints, tried_frontiers_, pose, mem_points, goal_,
                                      cfg_.cooccurrence, footprint_, explore,
                                      grid_.resolution(), rng_,
                                      cfg_.control.log_trajectory ? &dump : nullptr);
        if (!chosen) break;
        auto plan = plan_path(grid_, pose, chosen->world, cfg_.planner);
        if (!plan) continue; // unreachable frontier stays in the tried set
        if (cfg_.control.log_trajectory) {
            decision_dumps_.emplace_back(step_count_, std::move(dump));
            for (const auto& s : decision_dumps_.back().second)
                if (s.waypoint.cell == chosen->cell)
                    last_decision_ =
                        FrontierDecision{chosen->cell, chosen->world, s.o_d, s.o_s, s.o_f};
        }
        path_.assign(plan->begin(), plan->end());
        nav_target_ = chosen->world;
        blocked_streak_ = 0;
        leg_steps_ = 0;
        ++frontier_selections_;
        phase_ = Phase::NavigateToFrontier;
        return true;
    }

    // nothing left to explore: wander
    auto target = random_walk_target(grid_, pose, rng_, cfg_.planner,
                                     cfg_.control.random_walk_radius);
    if (target) {
        auto plan = plan_path(grid_, pose, *target, cfg_.planner);
        if (plan) {
            path_.assign(plan->begin(), plan->end());
            nav_target_ = *target;
            blocked_streak_ = 0;
            leg_steps_ = 0;
            phase_ = Phase::RandomWalking;
            return true;
        }
    }
    return false;
}

Action Controller::step(const Observation& obs) {
    if (stopped_) return Action::Stop;
    ++step_count_;

    if (awaiting_move_) {
        if (last_position_ && distance(obs.pose.position(), *last_position_) < 1e-9)
            ++blocked_streak_;
        else
            blocked_streak_ = 0;
        awaiting_move_ = false;
    }

    ingest(obs);

    if (step_count_ >= cfg_.control.max_steps) {
        stopped_ = true;
        stop_kind_ = StopKind::Budget;
        return emit(Action::Stop, obs);
    }

    const Pose& pose = obs.pose;
    for (int guard = 0; guard < 8; ++guard) {
        switch (phase_) {
            case Phase::LookingAround: {
                if (lookaround_left_ > 0) {
                    --lookaround_left_;
                    return emit(Action::TurnLeft, obs);
                }
                phase_ = Phase::QueryMemory;
                break;
            }
            case Phase::QueryMemory: {
                if (!resolve_query_phase(pose)) return emit(Action::TurnLeft, obs);
                break;
            }
            case Phase::NavigateToGoal:
            case Phase::NavigateToFrontier:
            case Phase::RandomWalking: {
                ++leg_steps_;
                if (blocked_streak_ >= cfg_.control.blocked_abandon_after ||
                    leg_steps_ > cfg_.control.max_leg_steps) {
                    if (phase_ == Phase::NavigateToGoal) mark_unreachable(target_entry_);
                    blocked_streak_ = 0;
                    path_.clear();
                    phase_ = Phase::QueryMemory;
                    break;
                }
                if (blocked_streak_ == cfg_.control.blocked_replan_after) {
                    // one replan attempt; the streak only resets on real
                    // movement, so persistent blockage escalates to abandon
                    auto plan = plan_path(grid_, pose, nav_target_, cfg_.planner);
                    if (!plan && phase_ == Phase::NavigateToGoal &&
                        cfg_.control.relaxed_goal_approach > cfg_.planner.approach_radius) {
                        PlannerParams relaxed = cfg_.planner;
                        relaxed.approach_radius = cfg_.control.relaxed_goal_approach;
                        plan = plan_path(grid_, pose, nav_target_, relaxed);
                    }
                    if (plan) {
                        path_.assign(plan->begin(), plan->end());
                        ++blocked_streak_;
                    } else {
                        if (phase_ == Phase::NavigateToGoal) mark_unreachable(target_entry_);
                        blocked_streak_ = 0;
                        path_.clear();
                        phase_ = Phase::QueryMemory;
                        break;
                    }
                }
                auto act = follow_step(pose, path_, cfg_.control);
                if (act) return emit(*act, obs);
                // arrived: positional unreachability marks are stale now
                unreachable_goals_.clear();
                if (phase_ == Phase::NavigateToGoal) {
                    if (!cfg_.control.verify_stop) {
                        stopped_ = true;
                        stop_kind_ = StopKind::Unverified;
                        return emit(Action::Stop, obs);
                    }
                    phase_ = Phase::Verifying;
                    panorama_.clear();
                    panorama_left_ = cfg_.verify.panorama_views;
                } else if (phase_ == Phase::NavigateToFrontier) {
                    phase_ = Phase::LookingAround;
                    lookaround_left_ = cfg_.control.lookaround_turns;
                } else {
                    phase_ = Phase::QueryMemory;
                }
                break;
            }
            case Phase::Verifying: {
                if (static_cast<int>(panorama_.size()) < cfg_.verify.panorama_views)
                    panorama_.push_back(pose);
                if (panorama_left_ > 0) {
                    --panorama_left_;
                    return emit(Action::TurnLeft, obs);
                }
                const MemoryEntry* entry = memory_.find(target_entry_);
                double confidence = entry ? entry->confidence : 0.0;
                double phi = verifier_->score(panorama_, goal_);
                ++verify_attempts_;
                double s = verify_score(phi, confidence, cfg_.verify.omega);
                if (s >= cfg_.verify.threshold) {
                    stopped_ = true;
                    stop_kind_ = StopKind::Verified;
                    return emit(Action::Stop, obs);
                }
                if (entry) memory_.remove(target_entry_);
                tried_goals_.insert(target_entry_);
                phase_ = Phase::QueryMemory;
                break;
            }
        }
    }
    return emit(Action::TurnLeft, obs); // degenerate fallback
}

} // namespace oval
