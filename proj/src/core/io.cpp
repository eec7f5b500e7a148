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

#include "ftrack/io.hpp"

#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>

#include "ftrack/error.hpp"
#include "json.hpp"

namespace ftrack {

using nlohmann::json;

namespace {

json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::kParse, std::string("malformed JSON: ") + e.what());
  }
}

const json& field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) fail(ErrorCode::kParse, where + " must be an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(ErrorCode::kParse, where + "." + key + " is missing");
  return *it;
}

const json& array_field(const json& obj, const char* key, const std::string& where) {
  const json& v = field(obj, key, where);
  if (!v.is_array()) fail(ErrorCode::kParse, where + "." + key + " must be an array");
  return v;
}

std::int64_t as_int(const json& v, const std::string& where) {
  if (!v.is_number_integer()) fail(ErrorCode::kParse, where + " must be an integer");
  return v.get<std::int64_t>();
}

double as_number(const json& v, const std::string& where) {
  if (!v.is_number()) fail(ErrorCode::kParse, where + " must be a number");
  return v.get<double>();
}

Shape as_shape(const json& v, const std::string& where) {
  if (!v.is_array()) fail(ErrorCode::kParse, where + " must be an array of integers");
  Shape s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    s.push_back(as_int(v[i], where + "[" + std::to_string(i) + "]"));
    if (s.back() < 1) fail(ErrorCode::kValidation, where + "[" + std::to_string(i) + "] must be >= 1");
  }
  return s;
}

std::string at(const std::string& array, std::size_t i) {
  return array + "[" + std::to_string(i) + "]";
}

}  // namespace

ComputationGraph parse_graph_json(const std::string& text) {
  const json doc = parse_text(text);
  ComputationGraph g;
  const json& ops = array_field(doc, "operators", "graph");
  for (std::size_t i = 0; i < ops.size(); ++i) {
    const std::string where = at("operators", i);
    Operator op;
    op.id = static_cast<int>(as_int(field(ops[i], "id", where), where + ".id"));
    if (auto it = ops[i].find("name"); it != ops[i].end()) {
      if (!it->is_string()) fail(ErrorCode::kParse, where + ".name must be a string");
      op.name = it->get<std::string>();
    }
    const json& shapes = array_field(ops[i], "tensor_shapes", where);
    if (shapes.empty()) fail(ErrorCode::kValidation, where + ".tensor_shapes must not be empty");
    for (std::size_t t = 0; t < shapes.size(); ++t) {
      op.tensor_shapes.push_back(as_shape(shapes[t], at(where + ".tensor_shapes", t)));
    }
    if (auto it = ops[i].find("flags"); it != ops[i].end()) {
      if (!it->is_array()) fail(ErrorCode::kParse, where + ".flags must be an array");
      for (const auto& f : *it) {
        if (!f.is_string()) fail(ErrorCode::kParse, where + ".flags must hold strings");
        const auto name = f.get<std::string>();
        if (name == "is_input") {
          op.is_input = true;
        } else if (name == "is_output") {
          op.is_output = true;
        } else {
          fail(ErrorCode::kValidation, where + ".flags has unknown flag '" + name + "'");
        }
      }
    }
    try {
      g.add_operator(std::move(op));
    } catch (const Error& e) {
      fail(e.code(), where + ": " + e.what());
    }
  }
  const json& edges = array_field(doc, "edges", "graph");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::string where = at("edges", i);
    Edge e;
    e.id = static_cast<int>(as_int(field(edges[i], "id", where), where + ".id"));
    e.src = static_cast<int>(as_int(field(edges[i], "src", where), where + ".src"));
    e.dst = static_cast<int>(as_int(field(edges[i], "dst", where), where + ".dst"));
    e.tensor_shape = as_shape(field(edges[i], "tensor_shape", where), where + ".tensor_shape");
    try {
      g.add_edge(std::move(e));
    } catch (const Error& err) {
      fail(err.code(), where + ": " + err.what());
    }
  }
  g.validate();
  return g;
}

DeviceGraph parse_devices_json(const std::string& text) {
  const json doc = parse_text(text);
  const int count = static_cast<int>(as_int(field(doc, "device_count", "devices"), "device_count"));
  std::vector<PartitionScheme> schemes;
  const json& arr = array_field(doc, "schemes", "devices");
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string where = at("schemes", i);
    PartitionScheme s;
    const json& id = field(arr[i], "id", where);
    if (!id.is_string()) fail(ErrorCode::kParse, where + ".id must be a string");
    s.id = id.get<std::string>();
    const json& groups = array_field(arr[i], "group_sizes", where);
    for (std::size_t g = 0; g < groups.size(); ++g) {
      s.group_sizes.push_back(static_cast<int>(as_int(groups[g], at(where + ".group_sizes", g))));
    }
    if (auto it = arr[i].find("latency_s"); it != arr[i].end()) {
      s.profile.latency = as_number(*it, where + ".latency_s");
    }
    const json& prof = array_field(arr[i], "profile", where);
    for (std::size_t p = 0; p < prof.size(); ++p) {
      const std::string pw = at(where + ".profile", p);
      BandwidthPoint pt;
      pt.log2_bytes = static_cast<int>(as_int(field(prof[p], "log2_bytes", pw), pw + ".log2_bytes"));
      pt.bandwidth = as_number(field(prof[p], "bandwidth_bytes_per_s", pw), pw + ".bandwidth_bytes_per_s");
      s.profile.points.push_back(pt);
    }
    try {
      s.profile.validate();
    } catch (const Error& e) {
      fail(e.code(), where + ".profile: " + e.what());
    }
    schemes.push_back(std::move(s));
  }
  return DeviceGraph(count, std::move(schemes));
}

CostTables parse_costs_json(const std::string& text, const ComputationGraph& g,
                            const ConfigSpace* space) {
  const json doc = parse_text(text);
  const json& ops = array_field(doc, "op_costs", "costs");
  const json& edges = array_field(doc, "edge_costs", "costs");

  struct OpEntry {
    int op, cfg;
    OperatorCost cost;
  };
  struct EdgeEntry {
    int edge, src, dst;
    EdgeCost cost;
  };
  std::vector<OpEntry> op_entries;
  for (std::size_t i = 0; i < ops.size(); ++i) {
    const std::string where = at("op_costs", i);
    OpEntry e;
    e.op = static_cast<int>(as_int(field(ops[i], "op", where), where + ".op"));
    e.cfg = static_cast<int>(as_int(field(ops[i], "cfg", where), where + ".cfg"));
    e.cost.m_p = as_number(field(ops[i], "m_p", where), where + ".m_p");
    e.cost.m_t = as_number(field(ops[i], "m_t", where), where + ".m_t");
    e.cost.t_c = as_number(field(ops[i], "t_c", where), where + ".t_c");
    e.cost.t_s = as_number(field(ops[i], "t_s", where), where + ".t_s");
    if (!g.has_operator(e.op)) fail(ErrorCode::kValidation, where + ".op names unknown operator " + std::to_string(e.op));
    if (e.cfg < 0) fail(ErrorCode::kValidation, where + ".cfg must be >= 0");
    if (e.cost.m_p < 0 || e.cost.m_t < 0 || e.cost.t_c < 0 || e.cost.t_s < 0) {
      fail(ErrorCode::kValidation, where + " has a negative cost");
    }
    op_entries.push_back(e);
  }
  std::vector<EdgeEntry> edge_entries;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::string where = at("edge_costs", i);
    EdgeEntry e;
    e.edge = static_cast<int>(as_int(field(edges[i], "edge", where), where + ".edge"));
    e.src = static_cast<int>(as_int(field(edges[i], "src_cfg", where), where + ".src_cfg"));
    e.dst = static_cast<int>(as_int(field(edges[i], "dst_cfg", where), where + ".dst_cfg"));
    e.cost.t_x = as_number(field(edges[i], "t_x", where), where + ".t_x");
    if (e.cost.t_x < 0) fail(ErrorCode::kValidation, where + ".t_x must be >= 0");
    edge_entries.push_back(e);
  }

  std::map<int, int> counts;
  for (const auto& op : g.operators()) {
    counts[op.id] = space ? static_cast<int>(space->size(op.id)) : 0;
  }
  if (!space) {
    for (const auto& e : op_entries) counts[e.op] = std::max(counts[e.op], e.cfg + 1);
    for (const auto& [op, k] : counts) {
      if (k == 0) fail(ErrorCode::kMissingCost, "no op_costs for operator " + std::to_string(op));
    }
  }

  CostTables tables(g, counts);
  for (std::size_t i = 0; i < op_entries.size(); ++i) {
    try {
      tables.set_op(op_entries[i].op, op_entries[i].cfg, op_entries[i].cost);
    } catch (const Error& e) {
      fail(ErrorCode::kValidation, at("op_costs", i) + ": " + e.what());
    }
  }
  for (std::size_t i = 0; i < edge_entries.size(); ++i) {
    const auto& e = edge_entries[i];
    try {
      tables.set_edge(e.edge, e.src, e.dst, e.cost);
    } catch (const Error& err) {
      fail(ErrorCode::kValidation, at("edge_costs", i) + ": " + err.what());
    }
  }
  tables.require_complete();
  return tables;
}

std::string graph_to_json(const ComputationGraph& g) {
  json doc;
  doc["operators"] = json::array();
  for (const auto& op : g.operators()) {
    json flags = json::array();
    if (op.is_input) flags.push_back("is_input");
    if (op.is_output) flags.push_back("is_output");
    doc["operators"].push_back(
        {{"id", op.id}, {"name", op.name}, {"tensor_shapes", op.tensor_shapes}, {"flags", flags}});
  }
  doc["edges"] = json::array();
  for (const auto& e : g.edges()) {
    doc["edges"].push_back(
        {{"id", e.id}, {"src", e.src}, {"dst", e.dst}, {"tensor_shape", e.tensor_shape}});
  }
  return doc.dump(2) + "\n";
}

std::string devices_to_json(const DeviceGraph& dev) {
  json doc;
  doc["device_count"] = dev.device_count();
  doc["schemes"] = json::array();
  for (const auto& s : dev.schemes()) {
    json prof = json::array();
    for (const auto& p : s.profile.points) {
      prof.push_back({{"log2_bytes", p.log2_bytes}, {"bandwidth_bytes_per_s", p.bandwidth}});
    }
    doc["schemes"].push_back({{"id", s.id},
                              {"group_sizes", s.group_sizes},
                              {"latency_s", s.profile.latency},
                              {"profile", prof}});
  }
  return doc.dump(2) + "\n";
}

std::string costs_to_json(const ComputationGraph& g, const CostTables& tables) {
  json doc;
  doc["op_costs"] = json::array();
  for (const auto& op : g.operators()) {
    for (int k = 0; k < tables.config_count(op.id); ++k) {
      const auto& c = tables.op(op.id, k);
      doc["op_costs"].push_back(
          {{"op", op.id}, {"cfg", k}, {"m_p", c.m_p}, {"m_t", c.m_t}, {"t_c", c.t_c}, {"t_s", c.t_s}});
    }
  }
  doc["edge_costs"] = json::array();
  for (const auto& e : g.edges()) {
    for (int s = 0; s < tables.config_count(e.src); ++s) {
      for (int d = 0; d < tables.config_count(e.dst); ++d) {
        doc["edge_costs"].push_back(
            {{"edge", e.id}, {"src_cfg", s}, {"dst_cfg", d}, {"t_x", tables.edge(e.id, s, d).t_x}});
      }
    }
  }
  return doc.dump(2) + "\n";
}

std::string result_to_json(const FrontierResult& result, const ComputationGraph& g,
                           const ConfigSpace* space, std::optional<int> device_count) {
  json doc;
  if (device_count) doc["device_count"] = *device_count;
  doc["frontier"] = json::array();
  const auto& ops = g.operators();
  for (const auto& p : result.points) {
    json strategy = json::array();
    for (std::size_t i = 0; i < ops.size(); ++i) {
      json entry = {{"op", ops[i].id}, {"cfg", p.strategy[i]}};
      if (space) {
        const auto& cfg = space->configs(ops[i].id)[static_cast<std::size_t>(p.strategy[i])];
        json maps = json::array();
        for (const auto& m : cfg.tensor_maps) maps.push_back(m.map);
        entry["mesh"] = cfg.mesh.dims;
        entry["tensor_maps"] = maps;
      }
      strategy.push_back(std::move(entry));
    }
    doc["frontier"].push_back({{"memory_bytes", p.memory}, {"time_s", p.time}, {"strategy", strategy}});
  }
  const auto& e = result.stats.eliminations;
  doc["stats"] = {{"eliminations",
                   {{"node", e.node}, {"edge", e.edge}, {"branch", e.branch}, {"heuristic", e.heuristic}}},
                  {"ldp_steps", result.stats.ldp_steps},
                  {"n", result.stats.backbone_length},
                  {"heuristic_count", e.heuristic}};
  return doc.dump(2) + "\n";
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string result_to_csv(const FrontierResult& result, std::optional<int> device_count) {
  std::string out = device_count ? "device_count,memory_bytes,time_s,strategy_id\n"
                                 : "memory_bytes,time_s,strategy_id\n";
  const std::string lead = device_count ? std::to_string(*device_count) + "," : "";
  for (std::size_t i = 0; i < result.points.size(); ++i) {
    out += lead + format_double(result.points[i].memory) + "," + format_double(result.points[i].time) + "," +
           std::to_string(i) + "\n";
  }
  return out;
}

std::string trace_to_json(const std::vector<ElimRecord>& log) {
  json doc = json::array();
  for (const auto& r : log) {
    json entry = {{"kind", elim_kind_name(r.kind)},
                  {"eliminated", {{"ops", r.eliminated_ops}, {"edges", r.eliminated_edges}}},
                  {"new_entity", r.new_entity},
                  {"records_count", r.records_count}};
    if (r.fixed_choice) entry["fixed_choice"] = {{"op", r.fixed_choice->op}, {"cfg", r.fixed_choice->cfg}};
    doc.push_back(std::move(entry));
  }
  return doc.dump(2) + "\n";
}

std::string profile_to_csv(const std::vector<ProfileRow>& rows) {
  std::string out = "device_count,min_time_s\n";
  for (const auto& r : rows) {
    out += std::to_string(r.device_count) + "," + (r.min_time ? format_double(*r.min_time) : "infeasible") + "\n";
  }
  return out;
}

std::string profile_to_json(const std::vector<ProfileRow>& rows) {
  json doc = json::array();
  for (const auto& r : rows) {
    doc.push_back({{"device_count", r.device_count},
                   {"min_time_s", r.min_time ? json(*r.min_time) : json(nullptr)}});
  }
  return doc.dump(2) + "\n";
}

void validate_result_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::kValidation, std::string("result is not JSON: ") + e.what());
  }
  try {
    const json& frontier = array_field(doc, "frontier", "result");
    double prev_m = -std::numeric_limits<double>::infinity();
    double prev_t = std::numeric_limits<double>::infinity();
    std::size_t width = 0;
    for (std::size_t i = 0; i < frontier.size(); ++i) {
      const std::string where = at("frontier", i);
      const double m = as_number(field(frontier[i], "memory_bytes", where), where + ".memory_bytes");
      const double t = as_number(field(frontier[i], "time_s", where), where + ".time_s");
      if (!(m > prev_m) || !(t < prev_t)) fail(ErrorCode::kValidation, where + " breaks the staircase order");
      prev_m = m;
      prev_t = t;
      const json& strategy = array_field(frontier[i], "strategy", where);
      if (i == 0) width = strategy.size();
      if (strategy.size() != width) fail(ErrorCode::kValidation, where + ".strategy has the wrong length");
      for (std::size_t j = 0; j < strategy.size(); ++j) {
        const std::string sw = at(where + ".strategy", j);
        as_int(field(strategy[j], "op", sw), sw + ".op");
        if (as_int(field(strategy[j], "cfg", sw), sw + ".cfg") < 0) {
          fail(ErrorCode::kValidation, sw + ".cfg must be >= 0");
        }
        if (strategy[j].contains("mesh") && !strategy[j]["mesh"].is_array()) {
          fail(ErrorCode::kValidation, sw + ".mesh must be an array");
        }
        if (strategy[j].contains("tensor_maps") && !strategy[j]["tensor_maps"].is_array()) {
          fail(ErrorCode::kValidation, sw + ".tensor_maps must be an array");
        }
      }
    }
    const json& stats = field(doc, "stats", "result");
    const json& elims = field(stats, "eliminations", "stats");
    for (const char* k : {"node", "edge", "branch", "heuristic"}) {
      as_int(field(elims, k, "stats.eliminations"), std::string("stats.eliminations.") + k);
    }
    as_int(field(stats, "ldp_steps", "stats"), "stats.ldp_steps");
    as_int(field(stats, "n", "stats"), "stats.n");
    as_int(field(stats, "heuristic_count", "stats"), "stats.heuristic_count");
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kValidation) throw;
    fail(ErrorCode::kValidation, e.what());
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIo, "cannot write '" + path + "'");
  out << text;
  if (!out) fail(ErrorCode::kIo, "failed writing '" + path + "'");
}

}  // namespace ftrack
