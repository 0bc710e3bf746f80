#include "d2p/render.hpp"

#include <sstream>

#include "d2p/errors.hpp"

namespace d2p {
namespace {

char glyph(int label) {
  if (label == kHandFree) return '.';
  if (label == kObjectHeld) return '#';
  return '?';
}

std::string bar(const LabelTimeline& timeline) {
  std::string out;
  out.reserve(static_cast<std::size_t>(timeline.size()));
  for (int t = 0; t < timeline.size(); ++t) out.push_back(glyph(timeline.at(t)));
  return out;
}

const char* fill(int label) {
  if (label == kHandFree) return "#d62728";
  if (label == kObjectHeld) return "#2ca02c";
  return "#7f7f7f";
}

void svg_bar(std::ostringstream& out, const LabelTimeline& timeline, double px_per_frame, int y,
             int height) {
  int run_start = 0;
  for (int t = 1; t <= timeline.size(); ++t) {
    if (t == timeline.size() || timeline.at(t) != timeline.at(run_start)) {
      out << "  <rect x=\"" << run_start * px_per_frame << "\" y=\"" << y << "\" width=\""
          << (t - run_start) * px_per_frame << "\" height=\"" << height << "\" fill=\""
          << fill(timeline.at(run_start)) << "\"/>\n";
      run_start = t;
    }
  }
}

}  // namespace

std::string render_timeline_txt(const LabelTimeline& prediction,
                                const std::optional<LabelTimeline>& ground_truth) {
  if (prediction.size() == 0) throw ShapeError("cannot render an empty timeline");
  std::string out;
  if (ground_truth) {
    if (ground_truth->size() != prediction.size()) {
      throw ShapeError("ground truth and prediction lengths differ");
    }
    out += "gt   " + bar(*ground_truth) + "\n";
    out += "pred " + bar(prediction) + "\n";
  } else {
    out += bar(prediction) + "\n";
  }
  return out;
}

std::string render_timeline_svg(const LabelTimeline& prediction,
                                const std::optional<LabelTimeline>& ground_truth) {
  if (prediction.size() == 0) throw ShapeError("cannot render an empty timeline");
  if (ground_truth && ground_truth->size() != prediction.size()) {
    throw ShapeError("ground truth and prediction lengths differ");
  }
  const double px_per_frame = 2.0;
  const int bar_height = 36;
  const int gap = 14;
  const int label_w = 52;
  const int rows = ground_truth ? 2 : 1;
  const double width = label_w + prediction.size() * px_per_frame + 8;
  const int height = rows * (bar_height + gap) + gap;

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\">\n";
  int y = gap;
  auto draw = [&](const LabelTimeline& tl, const char* name) {
    out << "  <text x=\"0\" y=\"" << y + bar_height / 2 + 4
        << "\" font-family=\"monospace\" font-size=\"12\">" << name << "</text>\n";
    out << "  <g transform=\"translate(" << label_w << ",0)\">\n";
    std::ostringstream inner;
    svg_bar(inner, tl, px_per_frame, y, bar_height);
    out << inner.str() << "  </g>\n";
    y += bar_height + gap;
  };
  if (ground_truth) draw(*ground_truth, "gt");
  draw(prediction, ground_truth ? "pred" : "timeline");
  out << "</svg>\n";
  return out.str();
}

}  // namespace d2p
