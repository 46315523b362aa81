// Copyright 2026 The HazardBench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "core/report.hpp"

#include <algorithm>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <unordered_map>

#include "core/csv.hpp"
#include "core/error.hpp"

namespace hb {

namespace {

std::string title_case(std::string_view s) {
  std::string out(s);
  if (!out.empty()) out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
  return out;
}

// A column of a report table: header text plus a cell accessor.
struct Column {
  std::string name;
  std::function<const Cell*(const ModelReport&)> cell;
};

class TextTable {
 public:
  void add_row(std::vector<std::string> row) { rows_.push_back(std::move(row)); }
  void add_rule() { rules_.push_back(rows_.size()); }
  // Vertical bars go before these column indices.
  void set_bars(std::set<std::size_t> bars) { bars_ = std::move(bars); }

  std::string str() const {
    std::vector<std::size_t> width;
    for (const auto& row : rows_) {
      if (width.size() < row.size()) width.resize(row.size(), 0);
      for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
    }
    std::size_t line_width = 0;
    for (std::size_t i = 0; i < width.size(); ++i) {
      line_width += width[i] + (i == 0 ? 0 : (bars_.count(i) ? 3 : 2));
    }
    std::ostringstream os;
    for (std::size_t r = 0; r <= rows_.size(); ++r) {
      if (std::count(rules_.begin(), rules_.end(), r)) os << std::string(line_width, '-') << '\n';
      if (r == rows_.size()) break;
      const auto& row = rows_[r];
      for (std::size_t i = 0; i < row.size(); ++i) {
        const std::string pad(width[i] - row[i].size(), ' ');
        if (i == 0) {
          os << row[i] << pad;
        } else {
          os << (bars_.count(i) ? " | " : "  ") << pad << row[i];
        }
      }
      os << '\n';
    }
    return os.str();
  }

 private:
  std::vector<std::vector<std::string>> rows_;
  std::vector<std::size_t> rules_;
  std::set<std::size_t> bars_;
};

std::optional<double> average(const std::vector<ModelReport>& models,
                              const std::function<const Cell*(const ModelReport&)>& cell) {
  double sum = 0.0;
  int n = 0;
  for (const auto& m : models) {
    if (m.reference) continue;
    const Cell* c = cell(m);
    if (c == nullptr || c->empty()) continue;
    sum += c->percent();
    ++n;
  }
  if (n == 0) return std::nullopt;
  return sum / n;
}

std::string csv_accuracy(const Cell* c) {
  if (c == nullptr || c->empty()) return "";
  return format_cell(*c);
}

// Renders a models-by-columns table and appends its CSV rows.
std::string models_by_columns(const std::string& table, const std::string& title,
                              const std::vector<ModelReport>& models,
                              const std::vector<Column>& columns,
                              const std::set<std::size_t>& bars, std::string& csv) {
  TextTable t;
  t.set_bars(bars);
  std::vector<std::string> header{"Model"};
  for (const auto& c : columns) header.push_back(c.name);
  t.add_row(header);
  t.add_rule();
  bool had_reference = false;
  for (const auto& m : models) {
    if (!m.reference) continue;
    had_reference = true;
    std::vector<std::string> row{m.model};
    for (const auto& c : columns) {
      const Cell* cell = c.cell(m);
      row.push_back(cell ? format_cell(*cell) : "-");
    }
    t.add_row(row);
  }
  if (had_reference) t.add_rule();
  for (const auto& m : models) {
    if (m.reference) continue;
    std::vector<std::string> row{m.model};
    for (const auto& c : columns) {
      const Cell* cell = c.cell(m);
      row.push_back(cell ? format_cell(*cell) : "-");
    }
    t.add_row(row);
  }
  for (const auto& m : models) {
    for (const auto& c : columns) {
      const Cell* cell = c.cell(m);
      csv += csv_line({table, m.model, c.name, std::to_string(cell ? cell->correct : 0),
                       std::to_string(cell ? cell->total : 0), csv_accuracy(cell)});
    }
  }
  t.add_rule();
  std::vector<std::string> avg{"Average"};
  for (const auto& c : columns) {
    const auto v = average(models, c.cell);
    avg.push_back(format_percent(v));
    csv += csv_line({table, "Average", c.name, "", "", v ? format_percent(v) : ""});
  }
  t.add_row(avg);
  t.add_rule();
  return title + "\n" + t.str();
}

std::vector<std::string> source_order(const std::vector<ModelReport>& models) {
  std::set<std::string> names;
  for (const auto& m : models) {
    for (const auto& [name, cell] : m.source) names.insert(name);
  }
  std::vector<std::string> out;
  for (const char* known : {"DriveBench", "SA-Bench"}) {
    if (names.erase(known)) out.push_back(known);
  }
  out.insert(out.end(), names.begin(), names.end());
  return out;
}

}  // namespace

std::string format_percent(std::optional<double> value) {
  if (!value) return "-";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", *value);
  return buf;
}

std::string format_cell(const Cell& c) {
  return c.empty() ? "-" : format_percent(c.percent());
}

ModelReport aggregate(const std::string& model, const std::vector<Outcome>& outcomes) {
  ModelReport r;
  r.model = model;
  for (const auto& o : outcomes) {
    if (!o.scenario) {
      r.no_edit.add(o.correct);
      continue;
    }
    r.scenario[static_cast<std::size_t>(*o.scenario)].add(o.correct);
    if (o.category) {
      r.category[static_cast<std::size_t>(*o.category)].add(o.correct);
      if (category_info(*o.category).cls == CategoryClass::kCommon) {
        r.normal.add(o.correct);
      } else {
        r.anomalous.add(o.correct);
      }
    }
    r.overall.add(o.correct);
    r.source[o.source.name].add(o.correct);
  }
  return r;
}

std::vector<Outcome> outcomes_for(const std::vector<BenchmarkEntry>& entries,
                                  const std::vector<EvalResult>& results) {
  std::unordered_map<std::string, const BenchmarkEntry*> by_id;
  for (const auto& e : entries) by_id[e.id] = &e;
  std::set<std::string> seen;
  std::vector<Outcome> out;
  for (const auto& r : results) {
    auto it = by_id.find(r.item_id);
    if (it == by_id.end()) {
      throw Error(ErrorCode::kNotFound, "result for unknown item '" + r.item_id + "'");
    }
    if (!seen.insert(r.item_id).second) {
      throw Error(ErrorCode::kDuplicate, "two results for item '" + r.item_id + "'");
    }
    const BenchmarkEntry& e = *it->second;
    out.push_back({e.scenario, e.category, e.source,
                   r.correct && r.parsed.has_value() && *r.parsed == e.gt_action});
  }
  return out;
}

RenderedReport render_report(const std::vector<ModelReport>& models) {
  RenderedReport out;
  out.csv = csv_line({"table", "model", "column", "correct", "total", "accuracy"});

  std::vector<Column> scen{{"No edit", [](const ModelReport& m) { return &m.no_edit; }}};
  for (ScenarioKind s : kAllScenarios) {
    scen.push_back({title_case(scenario_name(s)), [s](const ModelReport& m) {
                      return &m.scenario[static_cast<std::size_t>(s)];
                    }});
  }
  scen.push_back({"Total", [](const ModelReport& m) { return &m.overall; }});
  out.text += models_by_columns("scenario", "Accuracy by scenario (%)", models, scen,
                                {1, 2, 6}, out.csv);
  out.text += '\n';

  std::vector<Column> cat{{"No edit", [](const ModelReport& m) { return &m.no_edit; }}};
  for (ObjectCategory c : kAllCategories) {
    cat.push_back({std::string(category_name(c)), [c](const ModelReport& m) {
                     return &m.category[static_cast<std::size_t>(c)];
                   }});
  }
  cat.push_back({"Norm.", [](const ModelReport& m) { return &m.normal; }});
  cat.push_back({"Anom.", [](const ModelReport& m) { return &m.anomalous; }});
  cat.push_back({"All", [](const ModelReport& m) { return &m.overall; }});
  out.text += models_by_columns("category", "Accuracy by object category (%)", models, cat,
                                {1, 2, 6, 15}, out.csv);
  out.text += '\n';

  // Sources as rows, models as columns.
  TextTable t;
  std::vector<std::string> header{"Benchmark"};
  for (const auto& m : models) header.push_back(m.model);
  header.push_back("Avg");
  t.set_bars({1, header.size() - 1});
  t.add_row(header);
  t.add_rule();
  auto emit_row = [&](const std::string& label,
                      const std::function<const Cell*(const ModelReport&)>& cell) {
    std::vector<std::string> row{label};
    for (const auto& m : models) {
      const Cell* c = cell(m);
      row.push_back(c ? format_cell(*c) : "-");
      out.csv += csv_line({"source", m.model, label, std::to_string(c ? c->correct : 0),
                           std::to_string(c ? c->total : 0), csv_accuracy(c)});
    }
    const auto v = average(models, cell);
    row.push_back(format_percent(v));
    out.csv += csv_line({"source", "Average", label, "", "", v ? format_percent(v) : ""});
    t.add_row(row);
  };
  for (const auto& name : source_order(models)) {
    emit_row(name, [name](const ModelReport& m) -> const Cell* {
      auto it = m.source.find(name);
      return it == m.source.end() ? nullptr : &it->second;
    });
  }
  t.add_rule();
  emit_row("Overall", [](const ModelReport& m) { return &m.overall; });
  t.add_rule();
  out.text += "Accuracy by source benchmark (%)\n" + t.str();
  return out;
}

}  // namespace hb
