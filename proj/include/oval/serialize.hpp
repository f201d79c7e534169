#pragma once

#include <string>
#include <vector>

#include "oval/config.hpp"
#include "oval/controller.hpp"
#include "oval/lifelong.hpp"
#include "oval/memory_model.hpp"
#include "oval/sim_world.hpp"

namespace oval {

// All file formats are JSON with a "format" marker and version field;
// object keys serialize in sorted order, so equal inputs produce
// byte-equal files.

std::string scene_to_json(const Scene& scene);
Scene scene_from_json(const std::string& text);

std::string dataset_to_json(const Dataset& ds);
Dataset dataset_from_json(const std::string& text);

std::string report_to_json(const EvalReport& report);
EvalReport report_from_json(const std::string& text);
std::string report_to_csv(const EvalReport& report);

std::string memory_snapshot_to_json(const MemoryModel& memory); // view pixels dropped

std::string grid_dump_to_json(const OccupancyGrid& grid);

std::string config_to_json(const Config& cfg);
void config_update_from_json(Config& cfg, const std::string& text); // partial override

std::string step_record_to_json(const StepRecord& rec, int group_index, int index_in_group);
std::string decision_dump_to_json(int step, const std::vector<FrontierScore>& scores,
                                  int group_index, int index_in_group);

std::string ablation_to_json(const std::vector<AblationArm>& arms);

// SR/SPL per index-in-group, CSV ("targets,sr,spl,episodes").
std::string curves_csv(const EvalReport& report);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

} // namespace oval
