#pragma once

#include <cstdint>
#include <string>

#include "seizureml/dataset.hpp"

namespace seizureml {

/// Deterministically generates an EEG-like surrogate with the same shape as
/// the UCI seizure-recognition file: 2300 rows per label 1..5, 178 integer
/// samples per row. Label 1 rows carry sustained high-amplitude oscillations;
/// labels 2..5 are low-amplitude background, a slice of which contains short
/// high-amplitude bursts so the classes genuinely overlap. Row order is
/// shuffled, and every row derives its own rng stream from (seed, row index).
RawDataset generate_synthetic_dataset(std::uint64_t seed = 7);

/// Generates and writes the surrogate as a CSV in the standard layout.
void write_synthetic_dataset(const std::string& path, std::uint64_t seed = 7);

}  // namespace seizureml
