/**
 * Copyright 2026 The ftrack Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef FTRACK_IO_HPP_
#define FTRACK_IO_HPP_

#include <optional>
#include <string>
#include <vector>

#include "ftrack/config.hpp"
#include "ftrack/costmodel.hpp"
#include "ftrack/eliminate.hpp"
#include "ftrack/graph.hpp"
#include "ftrack/solver.hpp"

namespace ftrack {

// Parsers throw Error(kParse) for malformed JSON or wrongly typed fields and
// Error(kValidation) for well-formed input that breaks an invariant. Messages
// name the offending field, e.g. "operators[2].tensor_shapes".
ComputationGraph parse_graph_json(const std::string& text);
DeviceGraph parse_devices_json(const std::string& text);

// Without a configuration space each operator's K is one more than the
// largest cfg listed for it. Throws Error(kMissingCost) on gaps.
CostTables parse_costs_json(const std::string& text, const ComputationGraph& g,
                            const ConfigSpace* space = nullptr);

std::string graph_to_json(const ComputationGraph& g);
std::string devices_to_json(const DeviceGraph& dev);
std::string costs_to_json(const ComputationGraph& g, const CostTables& tables);

// {"frontier":[{"memory_bytes","time_s","strategy":[{"op","cfg","mesh","tensor_maps"}]}],
//  "stats":{...}}; mesh and tensor_maps appear only when `space` is given.
// A device count, when given, is emitted as a top-level "device_count".
std::string result_to_json(const FrontierResult& result, const ComputationGraph& g,
                           const ConfigSpace* space = nullptr,
                           std::optional<int> device_count = std::nullopt);
// Header "memory_bytes,time_s,strategy_id"; strategy_id is the row index.
// A device count adds a leading device_count column.
std::string result_to_csv(const FrontierResult& result,
                          std::optional<int> device_count = std::nullopt);
std::string trace_to_json(const std::vector<ElimRecord>& log);
// "device_count,min_time_s", with "infeasible" for rows where nothing fits.
std::string profile_to_csv(const std::vector<ProfileRow>& rows);
// [{"device_count","min_time_s"}], min_time_s null when nothing fits.
std::string profile_to_json(const std::vector<ProfileRow>& rows);

// Re-parses result JSON and checks its shape and staircase ordering.
// Throws Error(kValidation).
void validate_result_json(const std::string& text);

// Shortest decimal text that round-trips.
std::string format_double(double v);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace ftrack

#endif  // FTRACK_IO_HPP_
