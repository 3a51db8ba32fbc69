#include "bandit/output.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace bandit {

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, ptr);
}

std::string results_csv(const ExperimentResult& result) {
  std::string out = "step";
  for (const auto& [name, series] : result.metrics) {
    out += "," + name + "_mean," + name + "_sd";
  }
  out += "\n";
  const std::size_t H = static_cast<std::size_t>(result.horizon);
  for (std::size_t t = 0; t < H; ++t) {
    out += std::to_string(t + 1);
    for (const auto& [name, series] : result.metrics) {
      out += ",";
      out += format_double(series.mean[t]);
      out += ",";
      out += format_double(series.sd[t]);
    }
    out += "\n";
  }
  return out;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(line);
  while (std::getline(in, cur, ',')) out.push_back(cur);
  return out;
}

double parse_csv_double(const std::string& s) {
  if (s == "nan" || s == "-nan") return std::nan("");
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw std::runtime_error("bad numeric cell in results csv: \"" + s + "\"");
  }
  return v;
}

}  // namespace

ExperimentResult parse_results_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error("empty results csv");
  }
  auto header = split_csv_line(line);
  if (header.empty() || header[0] != "step") {
    throw std::runtime_error("results csv must start with a step column");
  }
  struct Column {
    std::string metric;
    bool isMean = false;
  };
  std::vector<Column> columns;
  for (std::size_t i = 1; i < header.size(); ++i) {
    const std::string& h = header[i];
    Column col;
    if (h.size() > 5 && h.substr(h.size() - 5) == "_mean") {
      col.metric = h.substr(0, h.size() - 5);
      col.isMean = true;
    } else if (h.size() > 3 && h.substr(h.size() - 3) == "_sd") {
      col.metric = h.substr(0, h.size() - 3);
    } else {
      throw std::runtime_error("unrecognized results csv column: " + h);
    }
    columns.push_back(col);
  }
  ExperimentResult result;
  for (const auto& col : columns) result.metrics[col.metric];
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      throw std::runtime_error("results csv row has wrong cell count");
    }
    for (std::size_t i = 0; i < columns.size(); ++i) {
      const double v = parse_csv_double(cells[i + 1]);
      auto& agg = result.metrics[columns[i].metric];
      (columns[i].isMean ? agg.mean : agg.sd).push_back(v);
    }
  }
  if (!result.metrics.empty()) {
    result.horizon = result.metrics.begin()->second.mean.size();
  }
  return result;
}

std::string summary_json(const ExperimentSetup& setup,
                         const ExperimentResult& result) {
  nlohmann::ordered_json j;

  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  for (const auto& [section, keys] : setup.raw.sections) {
    nlohmann::ordered_json sec = nlohmann::ordered_json::object();
    for (const auto& [key, value] : keys) sec[key] = value;
    config[section] = sec;
  }
  j["config"] = config;

  j["run"] = {{"policy", setup.policyName},
              {"environment", setup.envKind},
              {"horizon", result.horizon},
              {"replications", result.replications},
              {"plays_per_step", setup.playsPerStep},
              {"workers", result.workers},
              {"wall_seconds", result.wallSeconds}};

  nlohmann::ordered_json finals = nlohmann::ordered_json::object();
  for (const auto& [name, series] : result.metrics) {
    finals[name] = {{"mean", series.mean.back()}, {"sd", series.sd.back()}};
  }
  j["final"] = finals;

  nlohmann::ordered_json bounds = nlohmann::ordered_json::array();
  for (const auto& outcome : result.bounds) {
    nlohmann::ordered_json b;
    b["family"] = bound_family_name(outcome.spec.family);
    if (outcome.spec.family == BoundSpec::Family::Ucb2Gap) {
      b["alpha"] = outcome.spec.alpha;
    }
    if (outcome.spec.family == BoundSpec::Family::GenericLog ||
        outcome.spec.family == BoundSpec::Family::GenericSqrt) {
      b["c"] = outcome.spec.c;
    }
    b["bound"] = outcome.bound;
    b["observed"] = outcome.observed;
    b["reference"] = outcome.reference;
    switch (outcome.verdict) {
      case BoundVerdict::BelowBound:
        b["verdict"] = "below";
        break;
      case BoundVerdict::AboveBound:
        b["verdict"] = "above";
        break;
      case BoundVerdict::NotApplicable:
        b["verdict"] = "not-applicable";
        break;
    }
    bounds.push_back(b);
  }
  j["bounds"] = bounds;

  return j.dump(2) + "\n";
}

namespace {

std::string axis_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                          "#9467bd", "#ff7f0e", "#8c564b"};

}  // namespace

std::string results_svg(const ExperimentResult& result,
                        const std::string& title) {
  const double width = 900, height = 520;
  const double left = 70, right = 30, top = 46, bottom = 46;
  const double plotW = width - left - right;
  const double plotH = height - top - bottom;

  const std::size_t H = static_cast<std::size_t>(result.horizon);
  double yMax = 1.0;
  for (const auto& [name, series] : result.metrics) {
    for (std::size_t t = 0; t < H; ++t) {
      const double hi = series.mean[t] + series.sd[t];
      if (std::isfinite(hi)) yMax = std::max(yMax, hi);
    }
  }
  yMax *= 1.05;

  // Downsample long runs; the chart keeps at most ~2000 points per line.
  const std::size_t stride = std::max<std::size_t>(1, H / 2000);
  std::vector<std::size_t> idx;
  for (std::size_t t = 0; t < H; t += stride) idx.push_back(t);
  if (idx.empty() || idx.back() != H - 1) idx.push_back(H - 1);

  auto xPix = [&](std::size_t t) {
    const double frac = H > 1 ? static_cast<double>(t) /
                                    static_cast<double>(H - 1)
                              : 0.0;
    return left + frac * plotW;
  };
  auto yPix = [&](double v) { return top + plotH - (v / yMax) * plotH; };
  auto pt = [&](double x, double y) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.2f,%.2f ", x, y);
    return std::string(buf);
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " "
      << height << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"16\">"
      << title << "</text>\n";

  for (int i = 0; i <= 5; ++i) {
    const double v = yMax * i / 5.0;
    const double y = yPix(v);
    svg << "<line x1=\"" << left << "\" y1=\"" << y << "\" x2=\""
        << left + plotW << "\" y2=\"" << y
        << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    svg << "<text x=\"" << left - 8 << "\" y=\"" << y + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"11\">"
        << axis_label(v) << "</text>\n";
  }
  for (int i = 0; i <= 5; ++i) {
    const std::size_t t = (H - 1) * static_cast<std::size_t>(i) / 5;
    const double x = xPix(t);
    svg << "<text x=\"" << x << "\" y=\"" << top + plotH + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"11\">"
        << t + 1 << "</text>\n";
  }
  svg << "<line x1=\"" << left << "\" y1=\"" << top + plotH << "\" x2=\""
      << left + plotW << "\" y2=\"" << top + plotH
      << "\" stroke=\"#333333\"/>\n";
  svg << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left
      << "\" y2=\"" << top + plotH << "\" stroke=\"#333333\"/>\n";
  svg << "<text x=\"" << left + plotW / 2 << "\" y=\"" << height - 10
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"12\">step</text>\n";

  std::size_t colorIdx = 0;
  double legendY = top + 6;
  for (const auto& [name, series] : result.metrics) {
    const char* color = kPalette[colorIdx % 6];
    ++colorIdx;

    // Split at NaN so undefined stretches leave visible gaps.
    std::vector<std::vector<std::size_t>> segments(1);
    for (std::size_t t : idx) {
      if (std::isfinite(series.mean[t])) {
        segments.back().push_back(t);
      } else if (!segments.back().empty()) {
        segments.emplace_back();
      }
    }

    for (const auto& seg : segments) {
      if (seg.size() < 2) continue;
      std::string band;
      for (std::size_t t : seg) {
        band += pt(xPix(t), yPix(std::min(yMax, series.mean[t] +
                                                    series.sd[t])));
      }
      for (auto it = seg.rbegin(); it != seg.rend(); ++it) {
        band += pt(xPix(*it),
                   yPix(std::max(0.0, series.mean[*it] - series.sd[*it])));
      }
      svg << "<polygon points=\"" << band << "\" fill=\"" << color
          << "\" fill-opacity=\"0.15\" stroke=\"none\"/>\n";
      std::string linePts;
      for (std::size_t t : seg) linePts += pt(xPix(t), yPix(series.mean[t]));
      svg << "<polyline points=\"" << linePts
          << "\" fill=\"none\" stroke=\"" << color
          << "\" stroke-width=\"1.6\"/>\n";
    }

    svg << "<line x1=\"" << left + plotW - 150 << "\" y1=\"" << legendY
        << "\" x2=\"" << left + plotW - 126 << "\" y2=\"" << legendY
        << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << left + plotW - 120 << "\" y=\"" << legendY + 4
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << name
        << "</text>\n";
    legendY += 18;
  }

  svg << "</svg>\n";
  return svg.str();
}

OutputPaths write_outputs(const ExperimentSetup& setup,
                          const ExperimentResult& result,
                          const std::string& dir) {
  std::filesystem::create_directories(dir);
  OutputPaths paths;
  paths.csv = (std::filesystem::path(dir) / "results.csv").string();
  paths.json = (std::filesystem::path(dir) / "summary.json").string();
  paths.svg = (std::filesystem::path(dir) / "chart.svg").string();

  {
    std::ofstream out(paths.csv, std::ios::binary);
    out << results_csv(result);
  }
  {
    std::ofstream out(paths.json, std::ios::binary);
    out << summary_json(setup, result);
  }
  {
    std::ofstream out(paths.svg, std::ios::binary);
    out << results_svg(result, setup.policyName + " on " + setup.envKind);
  }
  return paths;
}

}  // namespace bandit
