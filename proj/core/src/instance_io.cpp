/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The SolGen Authors.
 * SPDX-License-Identifier: Apache-2.0
 */
#include "solgen/instance_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace solgen {

namespace {

using nlohmann::json;

json bound_to_json(double v) {
  if (v == kInf) return json("inf");
  if (v == -kInf) return json("-inf");
  return json(v);
}

double bound_from_json(const json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
    throw std::runtime_error("instance bound must be a number, \"inf\" or \"-inf\"");
  }
  return j.get<double>();
}

}  // namespace

std::string instance_to_json_string(const MilpInstance& inst) {
  inst.validate();
  json j;
  j["format"] = "solgen-milp";
  j["version"] = 1;
  j["name"] = inst.name;
  j["sense"] = inst.sense == Sense::minimize ? "min" : "max";
  j["num_vars"] = inst.num_vars();
  j["num_rows"] = inst.num_rows();
  j["objective"] = inst.c;
  j["rhs"] = inst.b;
  json senses = json::array();
  for (RowSense s : inst.row_sense) senses.push_back(s == RowSense::geq ? ">=" : "<=");
  j["row_sense"] = senses;
  json lower = json::array(), upper = json::array();
  for (double v : inst.lower) lower.push_back(bound_to_json(v));
  for (double v : inst.upper) upper.push_back(bound_to_json(v));
  j["lower"] = lower;
  j["upper"] = upper;
  j["integrality"] = inst.integrality;
  json triplets = json::array();
  for (int i = 0; i < inst.A.rows; ++i) {
    for (int k = inst.A.row_start[i]; k < inst.A.row_start[i + 1]; ++k) {
      triplets.push_back(json::array({i, inst.A.col_index[k], inst.A.value[k]}));
    }
  }
  j["matrix"] = {{"triplets", triplets}};
  return j.dump(2);
}

MilpInstance instance_from_json_string(const std::string& text) {
  json j = json::parse(text);
  if (!j.contains("format") || j["format"] != "solgen-milp") {
    throw std::runtime_error("not a solgen-milp file");
  }
  if (j.at("version").get<int>() != 1) {
    throw std::runtime_error("unsupported solgen-milp schema version");
  }
  MilpInstance inst;
  inst.name = j.at("name").get<std::string>();
  const std::string sense = j.at("sense").get<std::string>();
  if (sense == "min") {
    inst.sense = Sense::minimize;
  } else if (sense == "max") {
    inst.sense = Sense::maximize;
  } else {
    throw std::runtime_error("sense must be \"min\" or \"max\"");
  }
  const int n = j.at("num_vars").get<int>();
  const int m = j.at("num_rows").get<int>();
  inst.c = j.at("objective").get<std::vector<double>>();
  inst.b = j.at("rhs").get<std::vector<double>>();
  for (const auto& s : j.at("row_sense")) {
    const std::string t = s.get<std::string>();
    if (t == ">=") {
      inst.row_sense.push_back(RowSense::geq);
    } else if (t == "<=") {
      inst.row_sense.push_back(RowSense::leq);
    } else {
      throw std::runtime_error("row sense must be \">=\" or \"<=\"");
    }
  }
  for (const auto& v : j.at("lower")) inst.lower.push_back(bound_from_json(v));
  for (const auto& v : j.at("upper")) inst.upper.push_back(bound_from_json(v));
  inst.integrality = j.at("integrality").get<std::vector<uint8_t>>();

  inst.A.cols = n;
  int row = 0;
  std::vector<int> cols;
  std::vector<double> vals;
  for (const auto& t : j.at("matrix").at("triplets")) {
    const int i = t.at(0).get<int>();
    if (i < row) throw std::runtime_error("matrix triplets must be row-ordered");
    while (row < i) {
      inst.A.add_row(cols, vals);
      cols.clear();
      vals.clear();
      ++row;
    }
    cols.push_back(t.at(1).get<int>());
    vals.push_back(t.at(2).get<double>());
  }
  while (row < m) {
    inst.A.add_row(cols, vals);
    cols.clear();
    vals.clear();
    ++row;
  }
  inst.validate();
  return inst;
}

void write_instance(const MilpInstance& inst, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_instance: cannot open " + path);
  out << instance_to_json_string(inst) << "\n";
  if (!out) throw std::runtime_error("write_instance: write failed for " + path);
}

MilpInstance read_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_instance: cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return instance_from_json_string(buf.str());
}

namespace {

std::string mps_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  if (std::string(buf).size() > 12) std::snprintf(buf, sizeof(buf), "%.5e", v);
  return buf;
}

// field layout: 2-3, 5-12, 15-22, 25-36, 40-47, 50-61 (1-based columns)
std::string mps_line(const std::string& f1, const std::string& f2, const std::string& f3,
                     const std::string& f4 = "", const std::string& f5 = "",
                     const std::string& f6 = "") {
  std::string line(61, ' ');
  auto put = [&](size_t pos, const std::string& s) {
    for (size_t k = 0; k < s.size() && pos - 1 + k < line.size(); ++k) line[pos - 1 + k] = s[k];
  };
  put(2, f1);
  put(5, f2);
  put(15, f3);
  put(25, f4);
  put(40, f5);
  put(50, f6);
  while (!line.empty() && line.back() == ' ') line.pop_back();
  return line;
}

}  // namespace

void write_mps(const MilpInstance& inst, const std::string& path) {
  inst.validate();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_mps: cannot open " + path);

  auto row_name = [](int i) { return "R" + std::to_string(i + 1); };
  auto col_name = [](int j) { return "C" + std::to_string(j + 1); };

  out << "NAME          " << (inst.name.empty() ? "SOLGEN" : inst.name.substr(0, 8)) << "\n";
  if (inst.sense == Sense::maximize) {
    out << "OBJSENSE\n";
    out << "    MAX\n";
  }
  out << "ROWS\n";
  out << mps_line("N", "COST", "") << "\n";
  for (int i = 0; i < inst.num_rows(); ++i) {
    out << mps_line(inst.row_sense[i] == RowSense::geq ? "G" : "L", row_name(i), "") << "\n";
  }

  // column-major walk over the row-stored matrix
  std::vector<std::vector<std::pair<int, double>>> by_col(inst.num_vars());
  for (int i = 0; i < inst.A.rows; ++i) {
    for (int k = inst.A.row_start[i]; k < inst.A.row_start[i + 1]; ++k) {
      by_col[inst.A.col_index[k]].push_back({i, inst.A.value[k]});
    }
  }

  out << "COLUMNS\n";
  bool in_int_block = false;
  int marker = 0;
  for (int j = 0; j < inst.num_vars(); ++j) {
    const bool is_int = inst.integrality[j] != 0;
    if (is_int && !in_int_block) {
      out << mps_line("", "MARKER" + std::to_string(++marker), "'MARKER'", "", "'INTORG'") << "\n";
      in_int_block = true;
    } else if (!is_int && in_int_block) {
      out << mps_line("", "MARKER" + std::to_string(++marker), "'MARKER'", "", "'INTEND'") << "\n";
      in_int_block = false;
    }
    if (inst.c[j] != 0.0) {
      out << mps_line("", col_name(j), "COST", mps_number(inst.c[j])) << "\n";
    }
    for (const auto& [i, v] : by_col[j]) {
      out << mps_line("", col_name(j), row_name(i), mps_number(v)) << "\n";
    }
    if (inst.c[j] == 0.0 && by_col[j].empty()) {
      out << mps_line("", col_name(j), "COST", "0.0") << "\n";  // keep the column declared
    }
  }
  if (in_int_block) {
    out << mps_line("", "MARKER" + std::to_string(++marker), "'MARKER'", "", "'INTEND'") << "\n";
  }

  out << "RHS\n";
  for (int i = 0; i < inst.num_rows(); ++i) {
    if (inst.b[i] != 0.0) {
      out << mps_line("", "RHS", row_name(i), mps_number(inst.b[i])) << "\n";
    }
  }

  out << "BOUNDS\n";
  for (int j = 0; j < inst.num_vars(); ++j) {
    const double lo = inst.lower[j], up = inst.upper[j];
    if (lo == -kInf) {
      out << mps_line("MI", "BND", col_name(j)) << "\n";
    } else if (lo != 0.0) {
      out << mps_line("LO", "BND", col_name(j), mps_number(lo)) << "\n";
    }
    if (up == kInf) {
      if (lo == -kInf || inst.integrality[j]) {
        out << mps_line("PL", "BND", col_name(j)) << "\n";
      }
    } else {
      out << mps_line("UP", "BND", col_name(j), mps_number(up)) << "\n";
    }
  }
  out << "ENDATA\n";
  if (!out) throw std::runtime_error("write_mps: write failed for " + path);
}

}  // namespace solgen
