#pragma once

#include <optional>
#include <string>

#include "d2p/types.hpp"

namespace d2p {

// Text rendering: one character per frame, '.' HAND_FREE, '#' OBJECT_HELD
// ('?' for any other class). With ground truth present, the gt bar sits
// above the prediction.
std::string render_timeline_txt(const LabelTimeline& prediction,
                                const std::optional<LabelTimeline>& ground_truth);

// SVG rendering: horizontal bars (gt above prediction when present), time
// running left to right, HAND_FREE red, OBJECT_HELD green. Deterministic
// output, no timestamps.
std::string render_timeline_svg(const LabelTimeline& prediction,
                                const std::optional<LabelTimeline>& ground_truth);

}  // namespace d2p
