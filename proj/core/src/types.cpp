#include "d2p/types.hpp"

#include "d2p/errors.hpp"

namespace d2p {

const std::string& Detection::top_class() const {
  if (class_scores.empty()) throw SchemaError("detection carries no class scores");
  auto best = class_scores.begin();
  for (auto it = std::next(class_scores.begin()); it != class_scores.end(); ++it) {
    if (it->second > best->second) best = it;
  }
  return best->first;
}

}  // namespace d2p
