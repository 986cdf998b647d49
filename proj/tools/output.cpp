#include "output.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "zrp/errors.hpp"

namespace zrp::cli {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return fmt::format("{}", x);
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::string& kind,
                     std::uint64_t config_hash, std::uint64_t seed,
                     const std::vector<std::string>& columns)
    : path_(path), out_(path, std::ios::trunc), columns_(columns.size()) {
  if (!out_) throw ResourceError("cannot write " + path.string());
  out_ << fmt::format("# zrp {} schema={}\n", kind, kCsvSchemaVersion);
  out_ << fmt::format("# config_hash={:016x}\n", config_hash);
  out_ << fmt::format("# seed={}\n", seed);
  for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
  out_ << "\n";
}

void CsvWriter::comment(const std::string& text) { out_ << "# " << text << "\n"; }

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) throw std::logic_error("CSV row width mismatch");
  for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
  out_ << "\n";
}

void write_records(const std::filesystem::path& path, const std::string& kind,
                   std::uint64_t config_hash, std::uint64_t seed,
                   const std::vector<ExperimentRecord>& records) {
  CsvWriter csv(path, kind + "-records", config_hash, seed,
                {"parameters", "observable", "value", "std_error", "censored_fraction",
                 "provenance"});
  for (const auto& r : records) {
    csv.row({r.parameters, r.observable, format_number(r.value),
             r.std_error ? format_number(*r.std_error) : "",
             r.censored_fraction ? format_number(*r.censored_fraction) : "", r.provenance});
  }
}

namespace {

std::string escape(const std::string& s) {
  std::string out;
  for (const char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
                         "#8c564b", "#e377c2"};

}  // namespace

void write_svg(const std::filesystem::path& path, const std::string& title,
               const std::string& x_label, const std::string& y_label,
               const std::vector<Series>& series) {
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, s.y[i]);
      y1 = std::max(y1, s.y[i]);
    }
  }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 == x0) x1 = x0 + 1;
  if (y1 == y0) y1 = y0 + 1;
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad;
  y1 += pad;
  const double W = 640, H = 440, left = 70, right = 160, top = 40, bottom = 50;
  const double pw = W - left - right, ph = H - top - bottom;
  auto sx = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
  auto sy = [&](double y) { return top + (y1 - y) / (y1 - y0) * ph; };

  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ResourceError("cannot write " + path.string());
  out << fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" "
      "font-family=\"sans-serif\" font-size=\"12\">\n",
      W, H);
  out << fmt::format("<rect width=\"{}\" height=\"{}\" fill=\"white\"/>\n", W, H);
  out << fmt::format("<text x=\"{}\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n",
                     left + pw / 2, escape(title));
  out << fmt::format(
      "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n",
      left, top, pw, ph);
  for (int i = 0; i <= 5; ++i) {
    const double xv = x0 + (x1 - x0) * i / 5.0;
    const double yv = y0 + (y1 - y0) * i / 5.0;
    out << fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">{:.3g}</text>\n",
                       sx(xv), top + ph + 16, xv);
    out << fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"end\">{:.3g}</text>\n",
                       left - 6, sy(yv) + 4, yv);
  }
  out << fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", left + pw / 2,
                     H - 12, escape(x_label));
  out << fmt::format(
      "<text x=\"16\" y=\"{}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {})\">{}</text>\n",
      top + ph / 2, top + ph / 2, escape(y_label));
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = kColors[k % (sizeof(kColors) / sizeof(kColors[0]))];
    if (s.markers) {
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
        out << fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"2.5\" fill=\"{}\"/>\n",
                           sx(s.x[i]), sy(s.y[i]), color);
      }
    } else {
      std::string points;
      auto flush = [&] {
        if (!points.empty()) {
          out << fmt::format(
              "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
              color, points);
        }
        points.clear();
      };
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
          flush();
          continue;
        }
        points += fmt::format("{:.2f},{:.2f} ", sx(s.x[i]), sy(s.y[i]));
      }
      flush();
    }
    const double ly = top + 14 + 18 * static_cast<double>(k);
    out << fmt::format(
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" stroke-width=\"2\"/>\n",
        left + pw + 10, ly - 4, left + pw + 30, ly - 4, color);
    out << fmt::format("<text x=\"{}\" y=\"{}\">{}</text>\n", left + pw + 36, ly,
                       escape(s.label));
  }
  out << "</svg>\n";
}

}  // namespace zrp::cli
