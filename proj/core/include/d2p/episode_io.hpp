#pragma once

#include <filesystem>
#include <vector>

#include "d2p/episode.hpp"
#include "d2p/rng.hpp"

namespace d2p {

// Episode JSONL: line 1 is the header object, lines 2..N+1 one object per
// frame. UTF-8, LF line endings, numbers written so they parse back to the
// exact same doubles.
void write_episode(const Episode& ep, const std::filesystem::path& path);

// Throws ParseError (with line number) on malformed JSON and SchemaError on
// invariant violations such as a frame-count mismatch.
Episode read_episode(const std::filesystem::path& path);

// Index form of the split below, for callers that must keep episodes paired
// with side data. Same shuffle, same sizes.
struct DatasetSplit {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

DatasetSplit split_indices(std::size_t count, double train_fraction, RngSeed seed);

// Seeded shuffle, then round(n * train_fraction) episodes go to train and
// the rest to test. Throws EmptyDataset on empty input and DomainError when
// train_fraction is outside (0, 1).
std::pair<std::vector<Episode>, std::vector<Episode>> split_dataset(
    const std::vector<Episode>& episodes, double train_fraction, RngSeed seed);

}  // namespace d2p
