// Copyright 2026 The anonbench Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <map>

#include "anonbench/analysis.hpp"
#include "anonbench/error.hpp"
#include "anonbench/fsutil.hpp"
#include "anonbench/numfmt.hpp"

namespace anonbench::analysis {

namespace {

using experiment::CellStatus;
using experiment::ExperimentResult;
namespace fs = std::filesystem;

bool keeps(const std::vector<std::string>& selected, const std::string& name) {
  return selected.empty() || std::find(selected.begin(), selected.end(), name) != selected.end();
}

template <typename Pred>
std::vector<std::string> filtered(std::vector<std::string> names, Pred keep) {
  names.erase(std::remove_if(names.begin(), names.end(),
                             [&](const std::string& n) { return !keep(n); }),
              names.end());
  return names;
}

std::optional<double> u_priv(const ExperimentResult& r, const std::string& anonymizer,
                             const std::string& task) {
  const auto* cell = r.find_task_cell(anonymizer, task);
  if (!cell || cell->status != CellStatus::kOk || !cell->result) return std::nullopt;
  return cell->result->u_priv;
}

std::optional<double> delta(const ExperimentResult& r, const std::string& anonymizer,
                            const std::string& task) {
  const auto* cell = r.find_task_cell(anonymizer, task);
  if (!cell || cell->status != CellStatus::kOk || !cell->result) return std::nullopt;
  return cell->result->delta;
}

std::optional<double> metric_primary(const ExperimentResult& r, const std::string& anonymizer,
                                     const std::string& task, const std::string& metric) {
  const auto* cell = r.find_metric_cell(anonymizer, task, metric);
  if (!cell) return std::nullopt;
  return cell->primary();
}

std::string number(std::optional<double> v) { return v ? format_shortest(*v) : ""; }

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Keeps file names portable for arbitrary task and model names.
std::string file_token(const std::string& name) {
  std::string out;
  for (char c : name) {
    const bool plain = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                       (c >= '0' && c <= '9') || c == '-' || c == '_' || c == '.';
    out += plain ? c : '_';
  }
  return out;
}

std::string join_csv(const std::vector<std::string>& fields) {
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) line += ',';
    line += csv_field(fields[i]);
  }
  return line + "\n";
}

}  // namespace

std::string csv_field(const std::string& value) {
  if (value.find_first_of(",\"\n\r") == std::string::npos) return value;
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

bool ReportFilter::keeps_model(const std::string& name) const { return keeps(models, name); }
bool ReportFilter::keeps_task(const std::string& name) const { return keeps(tasks, name); }
bool ReportFilter::keeps_metric(const std::string& name) const { return keeps(metrics, name); }

CorrelationTable build_correlation_table(const ExperimentResult& result,
                                         const ReportFilter& filter) {
  CorrelationTable table;
  const auto models = filtered(result.anonymizer_names(),
                               [&](const std::string& n) { return filter.keeps_model(n); });
  table.tasks = filtered(result.task_names(),
                         [&](const std::string& n) { return filter.keeps_task(n); });
  table.metrics = filtered(result.metric_names(),
                           [&](const std::string& n) { return filter.keeps_metric(n); });
  table.n_models = models.size();
  for (const auto& task : table.tasks) {
    std::vector<CorrelationCell> row;
    for (const auto& metric : table.metrics) {
      std::vector<double> xs;
      std::vector<double> ys;
      for (const auto& model : models) {
        const auto x = metric_primary(result, model, task, metric);
        const auto y = u_priv(result, model, task);
        if (x && y) {
          xs.push_back(*x);
          ys.push_back(*y);
        }
      }
      CorrelationCell cell;
      cell.n_models = xs.size();
      if (xs.size() >= 2) {
        try {
          cell.tau = kendall_tau(xs, ys);
        } catch (const DegenerateInputError&) {
        }
      }
      row.push_back(cell);
    }
    table.cells.push_back(std::move(row));
  }
  for (std::size_t m = 0; m < table.metrics.size(); ++m) {
    double sum = 0;
    std::size_t count = 0;
    for (const auto& row : table.cells) {
      if (row[m].tau) {
        sum += *row[m].tau;
        ++count;
      }
    }
    table.average.push_back(count == 0 ? std::nullopt
                                       : std::optional<double>(sum / static_cast<double>(count)));
  }
  return table;
}

std::vector<TradeoffChart> tradeoff_charts(const ExperimentResult& result,
                                           const ReportFilter& filter) {
  const auto models = filtered(result.anonymizer_names(),
                               [&](const std::string& n) { return filter.keeps_model(n); });
  const auto tasks = filtered(result.task_names(),
                              [&](const std::string& n) { return filter.keeps_task(n); });
  const auto metric_names = filtered(result.metric_names(),
                                     [&](const std::string& n) { return filter.keeps_metric(n); });

  // Privacy tasks by kind, read from the config echo.
  std::map<std::string, std::string> privacy_kinds;
  if (result.config.contains("tasks") && result.config.at("tasks").is_array()) {
    for (const auto& t : result.config.at("tasks")) {
      const std::string kind = t.value("kind", "");
      if (kind == "deidentification" || kind == "authorship") {
        privacy_kinds[t.value("name", "")] = kind;
      }
    }
  }
  std::map<std::string, double> privacy;
  if (!privacy_kinds.empty()) {
    for (const auto& model : models) {
      double sum = 0;
      std::size_t count = 0;
      for (const auto& [task, kind] : privacy_kinds) {
        if (const auto v = u_priv(result, model, task)) {
          sum += kind == "authorship" ? 1.0 - *v : *v;
          ++count;
        }
      }
      if (count > 0) privacy[model] = sum / static_cast<double>(count);
    }
  }

  std::vector<TradeoffChart> charts;
  for (const auto& task : tasks) {
    TradeoffChart chart;
    chart.task = task;
    const bool fallback = privacy_kinds.empty();
    if (fallback && metric_names.empty()) continue;
    chart.x_label = fallback ? "1 - " + metric_names.front() : "privacy score";
    for (const auto& model : models) {
      const auto d = delta(result, model, task);
      if (!d) continue;
      std::optional<double> x;
      if (fallback) {
        if (const auto m = metric_primary(result, model, task, metric_names.front())) x = 1.0 - *m;
      } else if (auto it = privacy.find(model); it != privacy.end()) {
        x = it->second;
      }
      if (x) chart.points.push_back({model, *x, *d});
    }
    charts.push_back(std::move(chart));
  }
  return charts;
}

std::string render_tradeoff_svg(const TradeoffChart& chart) {
  constexpr double kWidth = 480;
  constexpr double kHeight = 360;
  constexpr double kLeft = 60;
  constexpr double kRight = 20;
  constexpr double kTop = 40;
  constexpr double kBottom = 50;

  double x_min = 0, x_max = 1, y_min = 0, y_max = 0;
  for (const auto& p : chart.points) {
    x_min = std::min(x_min, p.privacy);
    x_max = std::max(x_max, p.privacy);
    y_min = std::min(y_min, p.delta);
    y_max = std::max(y_max, p.delta);
  }
  if (y_max - y_min < 1e-9) {
    y_min -= 0.5;
    y_max += 0.5;
  }
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto sx = [&](double x) { return kLeft + (x - x_min) / (x_max - x_min) * plot_w; };
  auto sy = [&](double y) { return kTop + (y_max - y) / (y_max - y_min) * plot_h; };
  auto px = [](double v) { return format_shortest(std::round(v * 100) / 100); };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"480\" height=\"360\" "
         "viewBox=\"0 0 480 360\" font-family=\"sans-serif\" font-size=\"11\">\n";
  svg += "<title>" + xml_escape(chart.task) + "</title>\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"480\" height=\"360\" fill=\"white\"/>\n";
  svg += "<text x=\"240\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" +
         xml_escape(chart.task) + "</text>\n";
  svg += "<rect x=\"" + px(kLeft) + "\" y=\"" + px(kTop) + "\" width=\"" + px(plot_w) +
         "\" height=\"" + px(plot_h) + "\" fill=\"none\" stroke=\"#444\"/>\n";
  if (y_min < 0 && y_max > 0) {
    svg += "<line x1=\"" + px(kLeft) + "\" y1=\"" + px(sy(0)) + "\" x2=\"" +
           px(kLeft + plot_w) + "\" y2=\"" + px(sy(0)) +
           "\" stroke=\"#bbb\" stroke-dasharray=\"4 3\"/>\n";
  }
  const auto tick = [&](double v, double x, double y, const char* anchor) {
    svg += "<text x=\"" + px(x) + "\" y=\"" + px(y) + "\" text-anchor=\"" + anchor + "\">" +
           format_shortest(std::round(v * 1000) / 1000) + "</text>\n";
  };
  tick(x_min, kLeft, kHeight - kBottom + 16, "start");
  tick(x_max, kLeft + plot_w, kHeight - kBottom + 16, "end");
  tick(y_max, kLeft - 6, kTop + 4, "end");
  tick(y_min, kLeft - 6, kTop + plot_h, "end");
  svg += "<text x=\"" + px(kLeft + plot_w / 2) + "\" y=\"" + px(kHeight - 12) +
         "\" text-anchor=\"middle\">" + xml_escape(chart.x_label) + "</text>\n";
  svg += "<text x=\"16\" y=\"" + px(kTop + plot_h / 2) + "\" text-anchor=\"middle\" " +
         "transform=\"rotate(-90 16 " + px(kTop + plot_h / 2) + ")\">utility delta</text>\n";
  for (const auto& p : chart.points) {
    const std::string cx = px(sx(p.privacy));
    const std::string cy = px(sy(p.delta));
    svg += "<circle cx=\"" + cx + "\" cy=\"" + cy + "\" r=\"4\" fill=\"#2b6cb0\" data-anonymizer=\"" +
           xml_escape(p.anonymizer) + "\" data-x=\"" + format_shortest(p.privacy) +
           "\" data-y=\"" + format_shortest(p.delta) + "\"/>\n";
    svg += "<text x=\"" + px(sx(p.privacy) + 6) + "\" y=\"" + px(sy(p.delta) - 6) + "\">" +
           xml_escape(p.anonymizer) + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

fs::path emit_comparison(const ExperimentResult& result, const std::string& a,
                         const std::string& b, const fs::path& out_dir,
                         const ReportFilter& filter) {
  const auto names = result.anonymizer_names();
  for (const auto& model : {a, b}) {
    if (std::find(names.begin(), names.end(), model) == names.end()) {
      throw ArgumentError("unknown model '" + model + "'");
    }
  }
  std::string body = join_csv({"kind", "task", "measure", a, b, "difference"});
  auto row = [&](const std::string& kind, const std::string& task, const std::string& measure,
                 std::optional<double> va, std::optional<double> vb) {
    std::optional<double> diff;
    if (va && vb) diff = *va - *vb;
    body += join_csv({kind, task, measure, number(va), number(vb), number(diff)});
  };
  for (const auto& task : result.task_names()) {
    if (!filter.keeps_task(task)) continue;
    row("task", task, "u_priv", u_priv(result, a, task), u_priv(result, b, task));
    row("task", task, "delta", delta(result, a, task), delta(result, b, task));
    for (const auto& metric : result.metric_names()) {
      if (!filter.keeps_metric(metric)) continue;
      row("metric", task, metric, metric_primary(result, a, task, metric),
          metric_primary(result, b, task, metric));
    }
  }
  const fs::path path = out_dir / ("compare_" + file_token(a) + "_vs_" + file_token(b) + ".csv");
  write_file_atomic(path, body);
  return path;
}

void emit_report(const ExperimentResult& result, const fs::path& out_dir,
                 const ReportFilter& filter) {
  fs::create_directories(out_dir);

  std::string tasks_csv = join_csv(
      {"anonymizer", "task", "status", "metric", "u_orig", "u_priv", "delta", "n_test", "error"});
  for (const auto& cell : result.task_cells) {
    if (!filter.keeps_model(cell.anonymizer) || !filter.keeps_task(cell.task)) continue;
    std::vector<std::string> fields = {cell.anonymizer, cell.task,
                                       std::string(experiment::to_string(cell.status))};
    if (cell.result) {
      fields.insert(fields.end(), {cell.result->metric, format_shortest(cell.result->u_orig),
                                   format_shortest(cell.result->u_priv),
                                   format_shortest(cell.result->delta),
                                   std::to_string(cell.result->n_test)});
    } else {
      fields.insert(fields.end(), {"", "", "", "", ""});
    }
    fields.push_back(cell.error.value_or(""));
    tasks_csv += join_csv(fields);
  }
  write_file_atomic(out_dir / "tasks.csv", tasks_csv);

  const CorrelationTable table = build_correlation_table(result, filter);
  std::vector<std::string> header = {"task"};
  header.insert(header.end(), table.metrics.begin(), table.metrics.end());
  std::string corr = join_csv(header);
  for (std::size_t t = 0; t < table.tasks.size(); ++t) {
    std::vector<std::string> fields = {table.tasks[t]};
    for (const auto& cell : table.cells[t]) fields.push_back(number(cell.tau));
    corr += join_csv(fields);
  }
  std::vector<std::string> average = {"Average"};
  for (const auto& v : table.average) average.push_back(number(v));
  corr += join_csv(average);
  write_file_atomic(out_dir / "correlation.csv", corr);

  for (const auto& chart : tradeoff_charts(result, filter)) {
    const std::string stem = "tradeoff_" + file_token(chart.task);
    std::string data = join_csv({"anonymizer", "privacy", "delta"});
    for (const auto& p : chart.points) {
      data += join_csv({p.anonymizer, format_shortest(p.privacy), format_shortest(p.delta)});
    }
    write_file_atomic(out_dir / (stem + ".csv"), data);
    write_file_atomic(out_dir / (stem + ".svg"), render_tradeoff_svg(chart));
  }

  const auto models = filtered(result.anonymizer_names(),
                               [&](const std::string& n) { return filter.keeps_model(n); });
  for (std::size_t i = 0; i < models.size(); ++i) {
    for (std::size_t j = i + 1; j < models.size(); ++j) {
      emit_comparison(result, models[i], models[j], out_dir, filter);
    }
  }
}

}  // namespace anonbench::analysis
