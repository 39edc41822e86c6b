#pragma once

#include "gssl/types.hpp"

#include <filesystem>
#include <string>

namespace gssl {

/// Feature matrix (one instance per row) with a ground-truth class per row.
struct LabeledDataset {
  std::string name;
  Matrix features;
  ClassVector truth;
  int class_count = 0;

  Index size() const { return features.rows(); }
  Index dimension() const { return features.cols(); }

  /// Throws ValidationError unless every type invariant holds.
  void validate() const;
};

/// Gaussian mixture geometry behind the synthetic cluster datasets.
struct MixtureLayout {
  Matrix means;                     // one row per component
  std::vector<int> component_class; // class of each component
  std::vector<int> component;       // generating component of each instance
};

// Cluster-assumption data: two unit-variance Gaussians whose antipodal means
// are kG241cSeparation apart along a seeded random direction. At 241
// dimensions a separation below ~6 leaves mutual-kNN neighborhoods close to
// class-random; 7.0 keeps the cluster cut as the smoothest graph cut.
inline constexpr double kG241cSeparation = 7.0;
// Four unit-variance Gaussians A1, B1, A2, B2. Pairs (A1, B1) and (A2, B2) are
// close; the two pairs are far apart.
inline constexpr double kG241nIntraClassDistance = 6.0;
inline constexpr double kG241nInterClassGap = 1.0;
inline constexpr double kDigit1NoiseSigma = 0.05;
inline constexpr int kDigit1LatentDim = 5;

MixtureLayout g241c_layout(Seed seed, Index n, Index d, double separation = kG241cSeparation);
MixtureLayout g241n_layout(Seed seed, Index n, Index d);

LabeledDataset gen_g241c(Seed seed, Index n = 1500, Index d = 241,
                         double separation = kG241cSeparation);
LabeledDataset gen_g241n(Seed seed, Index n = 1500, Index d = 241);

/// Latent coordinates (n x 5, uniform on the unit cube) used by gen_digit1_like.
Matrix digit1_latent(Seed seed, Index n);

/// Class rule of the Digit1 surrogate: first latent coordinate above one half.
inline int digit1_class(double first_latent) { return first_latent > 0.5 ? 1 : 0; }

/// Smooth 5-parameter manifold embedded in d dimensions, plus observation noise.
LabeledDataset gen_digit1_like(Seed seed, Index n = 1500, Index d = 241);

/// Reads comma-separated rows: numeric features followed by an integer class.
/// A non-numeric first row is treated as a header. Classes are re-indexed by
/// ascending original value.
LabeledDataset load_csv(const std::filesystem::path& path);

/// Writes features at full round-trip precision followed by the class column.
void save_csv(const LabeledDataset& dataset, const std::filesystem::path& path);

}  // namespace gssl
