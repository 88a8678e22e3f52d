// Copyright 2026 the lakeq authors
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
#include <cstdio>

#include "common/error.hpp"
#include "operators/operators.hpp"

namespace lakeq {

PlotSpec make_plot(const Relation& input, std::string_view kind, std::string_view x,
                   std::string_view y, std::string_view title) {
  if (kind != "bar" && kind != "line" && kind != "scatter") {
    fail(ErrorKind::kBinding, "plot: kind must be bar, line or scatter, got '" + std::string(kind) + "'");
  }
  auto xi = input.find_column(x);
  if (!xi) fail(ErrorKind::kBinding, "plot: unknown column '" + std::string(x) + "' " + input.schema_string());
  auto yi = input.find_column(y);
  if (!yi) fail(ErrorKind::kBinding, "plot: unknown column '" + std::string(y) + "' " + input.schema_string());
  if (input.column(*yi).type != ColumnType::kNumber) {
    fail(ErrorKind::kBinding, "plot: y column '" + std::string(y) + "' has type " +
                                  to_string(input.column(*yi).type) + ", expected NUMBER");
  }
  PlotSpec p;
  p.kind = std::string(kind);
  p.x = std::string(x);
  p.y = std::string(y);
  p.title = std::string(title);
  for (const auto& row : input.rows()) p.data.emplace_back(row[*xi], row[*yi]);
  std::stable_sort(p.data.begin(), p.data.end(), [](const auto& a, const auto& b) {
    return compare_cells(a.first, b.first) < 0;
  });
  return p;
}

nlohmann::ordered_json plot_to_json(const PlotSpec& plot) {
  nlohmann::ordered_json j;
  j["kind"] = plot.kind;
  j["x"] = plot.x;
  j["y"] = plot.y;
  j["title"] = plot.title;
  auto& data = j["data"] = nlohmann::ordered_json::array();
  for (const auto& [x, y] : plot.data) data.push_back({cell_to_json(x), cell_to_json(y)});
  return j;
}

namespace {

constexpr double kWidth = 640, kHeight = 400;
constexpr double kLeft = 60, kRight = 20, kTop = 40, kBottom = 60;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(std::string_view s) {
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

std::optional<double> number_of(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return *d;
  if (const auto* b = std::get_if<bool>(&c)) return *b ? 1.0 : 0.0;
  return std::nullopt;
}

}  // namespace

std::string render_svg(const PlotSpec& plot) {
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  const double x0 = kLeft, y0 = kHeight - kBottom;

  double lo = 0, hi = 0;
  for (const auto& [x, y] : plot.data) {
    if (auto v = number_of(y)) {
      lo = std::min(lo, *v);
      hi = std::max(hi, *v);
    }
  }
  if (hi == lo) hi = lo + 1;
  auto ypos = [&](double v) { return y0 - (v - lo) / (hi - lo) * plot_h; };

  // Scatter plots with numeric x use a linear x scale; everything else places
  // points in evenly spaced slots in x order.
  bool linear_x = plot.kind == "scatter" && !plot.data.empty() &&
                  std::all_of(plot.data.begin(), plot.data.end(),
                              [](const auto& p) { return number_of(p.first).has_value(); });
  double xlo = 0, xhi = 1;
  if (linear_x) {
    xlo = *number_of(plot.data.front().first);
    xhi = *number_of(plot.data.back().first);
    if (xhi == xlo) xhi = xlo + 1;
  }
  const double n = static_cast<double>(plot.data.size());
  const double slot = n > 0 ? plot_w / n : plot_w;
  auto xpos = [&](std::size_t i) {
    if (linear_x) return x0 + (*number_of(plot.data[i].first) - xlo) / (xhi - xlo) * plot_w;
    return x0 + slot * (static_cast<double>(i) + 0.5);
  };

  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" +
       num(kHeight) + "\" viewBox=\"0 0 " + num(kWidth) + " " + num(kHeight) + "\">\n";
  s += "<rect x=\"0\" y=\"0\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) + "\" fill=\"white\"/>\n";
  s += "<text x=\"" + num(kWidth / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" +
       escape(plot.title) + "</text>\n";
  // axes
  s += "<line x1=\"" + num(x0) + "\" y1=\"" + num(y0) + "\" x2=\"" + num(x0 + plot_w) + "\" y2=\"" +
       num(y0) + "\" stroke=\"black\"/>\n";
  s += "<line x1=\"" + num(x0) + "\" y1=\"" + num(y0) + "\" x2=\"" + num(x0) + "\" y2=\"" +
       num(y0 - plot_h) + "\" stroke=\"black\"/>\n";
  s += "<text x=\"" + num(x0 + plot_w / 2) + "\" y=\"" + num(kHeight - 12) +
       "\" text-anchor=\"middle\" font-size=\"12\">" + escape(plot.x) + "</text>\n";
  s += "<text x=\"16\" y=\"" + num(y0 - plot_h / 2) + "\" text-anchor=\"middle\" font-size=\"12\" "
       "transform=\"rotate(-90 16 " + num(y0 - plot_h / 2) + ")\">" + escape(plot.y) + "</text>\n";
  for (int t = 0; t <= 4; ++t) {
    double v = lo + (hi - lo) * t / 4.0;
    s += "<text x=\"" + num(x0 - 6) + "\" y=\"" + num(ypos(v) + 4) +
         "\" text-anchor=\"end\" font-size=\"10\">" + escape(format_number(std::round(v * 100) / 100)) +
         "</text>\n";
  }

  std::string polyline;
  for (std::size_t i = 0; i < plot.data.size(); ++i) {
    const auto& [x, y] = plot.data[i];
    double cx = xpos(i);
    if (!linear_x) {
      s += "<text x=\"" + num(cx) + "\" y=\"" + num(y0 + 16) +
           "\" text-anchor=\"middle\" font-size=\"10\">" + escape(render_cell(x)) + "</text>\n";
    }
    auto v = number_of(y);
    if (!v) continue;
    if (plot.kind == "bar") {
      double top = std::min(ypos(*v), ypos(0)), bottom = std::max(ypos(*v), ypos(0));
      s += "<rect x=\"" + num(cx - slot * 0.35) + "\" y=\"" + num(top) + "\" width=\"" +
           num(slot * 0.7) + "\" height=\"" + num(bottom - top) + "\" fill=\"steelblue\"/>\n";
    } else {
      s += "<circle cx=\"" + num(cx) + "\" cy=\"" + num(ypos(*v)) + "\" r=\"3\" fill=\"steelblue\"/>\n";
      if (!polyline.empty()) polyline += " ";
      polyline += num(cx) + "," + num(ypos(*v));
    }
  }
  if (plot.kind == "line" && !polyline.empty()) {
    s += "<polyline points=\"" + polyline + "\" fill=\"none\" stroke=\"steelblue\"/>\n";
  }
  s += "</svg>\n";
  return s;
}

}  // namespace lakeq
