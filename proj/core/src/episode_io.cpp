#include "d2p/episode_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <utility>

#include <nlohmann/json.hpp>

#include "d2p/errors.hpp"

namespace d2p {

namespace {

using nlohmann::json;

json camera_to_json(const CameraModel& cam) {
  json j;
  j["fx"] = cam.fx;
  j["fy"] = cam.fy;
  j["cx"] = cam.cx;
  j["cy"] = cam.cy;
  json rot = json::array();
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) rot.push_back(cam.rotation(r, c));
  }
  j["rotation"] = std::move(rot);
  j["translation"] = {cam.translation.x(), cam.translation.y(), cam.translation.z()};
  return j;
}

CameraModel camera_from_json(const json& j) {
  CameraModel cam;
  cam.fx = j.at("fx").get<double>();
  cam.fy = j.at("fy").get<double>();
  cam.cx = j.at("cx").get<double>();
  cam.cy = j.at("cy").get<double>();
  const auto& rot = j.at("rotation");
  if (rot.size() != 9) throw SchemaError("camera rotation must carry 9 entries");
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) cam.rotation(r, c) = rot.at(3 * r + c).get<double>();
  }
  const auto& t = j.at("translation");
  if (t.size() != 3) throw SchemaError("camera translation must carry 3 entries");
  cam.translation = Eigen::Vector3d(t.at(0).get<double>(), t.at(1).get<double>(),
                                    t.at(2).get<double>());
  return cam;
}

json frame_to_json(const FrameRecord& frame) {
  json j;
  j["index"] = frame.index;
  j["time_s"] = frame.time_s;
  j["features"] = frame.features;
  json dets = json::array();
  for (const Detection& det : frame.detections) {
    json d;
    d["center"] = {det.center.u, det.center.v};
    d["half_extent"] = {det.half_extent[0], det.half_extent[1]};
    d["scores"] = det.class_scores;
    d["confidence"] = det.confidence;
    dets.push_back(std::move(d));
  }
  j["detections"] = std::move(dets);
  j["gt_label"] = frame.gt_label ? json(frame.gt_label->class_index) : json(nullptr);
  j["gt_hand"] = frame.gt_hand ? json({frame.gt_hand->u, frame.gt_hand->v}) : json(nullptr);
  return j;
}

FrameRecord frame_from_json(const json& j) {
  FrameRecord frame;
  frame.index = j.at("index").get<int>();
  frame.time_s = j.at("time_s").get<double>();
  frame.features = j.at("features").get<std::vector<double>>();
  for (const auto& d : j.at("detections")) {
    Detection det;
    const auto& center = d.at("center");
    det.center = Pixel{center.at(0).get<double>(), center.at(1).get<double>()};
    const auto& extent = d.at("half_extent");
    det.half_extent = {extent.at(0).get<double>(), extent.at(1).get<double>()};
    det.class_scores = d.at("scores").get<std::map<std::string, double>>();
    det.confidence = d.at("confidence").get<double>();
    frame.detections.push_back(std::move(det));
  }
  if (j.contains("gt_label") && !j.at("gt_label").is_null()) {
    frame.gt_label = ActionLabel{j.at("gt_label").get<int>()};
  }
  if (j.contains("gt_hand") && !j.at("gt_hand").is_null()) {
    const auto& hand = j.at("gt_hand");
    frame.gt_hand = Pixel{hand.at(0).get<double>(), hand.at(1).get<double>()};
  }
  return frame;
}

}  // namespace

void write_episode(const Episode& ep, const std::filesystem::path& path) {
  ep.validate();
  std::ofstream out(path, std::ios::binary);  // binary keeps LF endings everywhere
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");

  json header;
  header["id"] = ep.id;
  header["fps"] = ep.fps;
  header["frame_count"] = ep.frame_count;
  header["feature_dim"] = ep.feature_dim;
  header["camera"] = camera_to_json(ep.camera);
  header["table_height_m"] = ep.table_height_m;
  json objects = json::array();
  for (const ObjectEntry& obj : ep.objects) {
    objects.push_back({{"id", obj.id}, {"class", obj.class_name}, {"graspable", obj.graspable}});
  }
  header["objects"] = std::move(objects);
  out << header.dump() << '\n';

  for (const FrameRecord& frame : ep.frames) {
    out << frame_to_json(frame).dump() << '\n';
  }
  if (!out) throw IoError("short write to '" + path.string() + "'");
}

Episode read_episode(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");

  std::string line;
  int line_number = 0;
  Episode ep;

  auto parse_line = [&](const std::string& text) {
    try {
      return json::parse(text);
    } catch (const json::parse_error& e) {
      throw ParseError(std::string("invalid JSON: ") + e.what(), line_number);
    }
  };

  if (!std::getline(in, line)) throw ParseError("missing header line", 1);
  ++line_number;
  try {
    const json header = parse_line(line);
    ep.id = header.at("id").get<std::string>();
    ep.fps = header.at("fps").get<double>();
    ep.frame_count = header.at("frame_count").get<int>();
    ep.feature_dim = header.at("feature_dim").get<int>();
    ep.camera = camera_from_json(header.at("camera"));
    ep.table_height_m = header.at("table_height_m").get<double>();
    for (const auto& obj : header.at("objects")) {
      ep.objects.push_back(ObjectEntry{obj.at("id").get<std::string>(),
                                       obj.at("class").get<std::string>(),
                                       obj.at("graspable").get<bool>()});
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad header: ") + e.what(), line_number);
  }

  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    try {
      ep.frames.push_back(frame_from_json(parse_line(line)));
    } catch (const json::exception& e) {
      throw ParseError(std::string("bad frame record: ") + e.what(), line_number);
    }
  }

  ep.validate();
  return ep;
}

DatasetSplit split_indices(std::size_t count, double train_fraction, RngSeed seed) {
  if (count == 0) throw EmptyDataset("split_indices: nothing to split");
  if (!(train_fraction > 0.0) || !(train_fraction < 1.0)) {
    throw DomainError("split_indices: train_fraction must lie in (0, 1)");
  }

  std::vector<std::size_t> order(count);
  for (std::size_t i = 0; i < count; ++i) order[i] = i;

  Rng rng(seed);
  for (std::size_t i = count; i > 1; --i) {  // Fisher-Yates
    const auto j = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i) - 1));
    std::swap(order[i - 1], order[j]);
  }

  const auto train_size =
      static_cast<std::size_t>(std::llround(static_cast<double>(count) * train_fraction));
  DatasetSplit split;
  split.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(train_size));
  split.test.assign(order.begin() + static_cast<std::ptrdiff_t>(train_size), order.end());
  return split;
}

std::pair<std::vector<Episode>, std::vector<Episode>> split_dataset(
    const std::vector<Episode>& episodes, double train_fraction, RngSeed seed) {
  if (episodes.empty()) throw EmptyDataset("split_dataset: no episodes");
  const DatasetSplit split = split_indices(episodes.size(), train_fraction, seed);
  std::pair<std::vector<Episode>, std::vector<Episode>> result;
  result.first.reserve(split.train.size());
  result.second.reserve(split.test.size());
  for (const std::size_t i : split.train) result.first.push_back(episodes[i]);
  for (const std::size_t i : split.test) result.second.push_back(episodes[i]);
  return result;
}

}  // namespace d2p
