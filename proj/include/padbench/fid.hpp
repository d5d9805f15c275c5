#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "error.hpp"
#include "io.hpp"

namespace padbench {

/// N x D row-major embeddings (one row per image).
struct EmbeddingSet {
  std::uint32_t count = 0;
  std::uint32_t dim = 0;
  std::vector<float> data;

  float at(std::uint32_t row, std::uint32_t col) const { return data[static_cast<std::size_t>(row) * dim + col]; }
  friend bool operator==(const EmbeddingSet&, const EmbeddingSet&) = default;
};

struct GaussianStats {
  Eigen::VectorXd mu;
  Eigen::MatrixXd sigma;
};

/// Column means and unbiased (N - 1) covariance, symmetrized, in double.
inline GaussianStats gaussian_stats(const EmbeddingSet& e) {
  if (e.count < 2) throw Error(ErrorCode::TooFewSamples, "need at least 2 embeddings, got " + std::to_string(e.count));
  if (e.dim == 0) throw Error(ErrorCode::DimensionZero, "embedding dimension is 0");
  if (e.data.size() != static_cast<std::size_t>(e.count) * e.dim) {
    throw Error(ErrorCode::TruncatedFile, "embedding data length does not match N x D");
  }
  for (float v : e.data)
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFiniteValue, "embedding contains a non-finite value");

  using RowMajor = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const Eigen::Map<const RowMajor> raw(e.data.data(), e.count, e.dim);
  Eigen::MatrixXd x = raw.cast<double>();

  GaussianStats s;
  s.mu = x.colwise().mean().transpose();
  x.rowwise() -= s.mu.transpose();
  s.sigma = Eigen::MatrixXd::Zero(e.dim, e.dim);
  s.sigma.selfadjointView<Eigen::Lower>().rankUpdate(x.transpose(), 1.0 / (static_cast<double>(e.count) - 1.0));
  s.sigma = s.sigma.selfadjointView<Eigen::Lower>();
  return s;
}

inline constexpr double kSymmetryTolerance = 1e-9;
inline constexpr double kEigenClampRelative = 1e-8;

namespace detail {

inline void require_symmetric(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::NotSymmetric, "matrix is not square");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > kSymmetryTolerance * scale) {
    throw Error(ErrorCode::NotSymmetric, "matrix is not symmetric within 1e-9");
  }
}

// Eigenvalues below -1e-8 * max|lambda| are an error; the rest of the
// negative ones are clamped to 0.
inline Eigen::VectorXd clamped_eigenvalues(const Eigen::VectorXd& evals) {
  const double norm = evals.cwiseAbs().maxCoeff();
  const double tol = kEigenClampRelative * norm;
  if (evals.size() > 0 && evals.minCoeff() < -tol) {
    throw Error(ErrorCode::IndefiniteMatrix,
                "eigenvalue " + std::to_string(evals.minCoeff()) + " below -1e-8 * |m|");
  }
  return evals.cwiseMax(0.0);
}

}  // namespace detail

/// Principal square root of a symmetric PSD matrix via eigendecomposition.
inline Eigen::MatrixXd matrix_sqrt_psd(const Eigen::MatrixXd& m) {
  detail::require_symmetric(m);
  const Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::IndefiniteMatrix, "eigendecomposition did not converge");
  const Eigen::VectorXd roots = detail::clamped_eigenvalues(es.eigenvalues()).cwiseSqrt();
  const Eigen::MatrixXd& v = es.eigenvectors();
  Eigen::MatrixXd r = v * roots.asDiagonal() * v.transpose();
  return 0.5 * (r + r.transpose());
}

/// Tr(m^(1/2)) for symmetric PSD m; eigenvalues only.
inline double trace_sqrt_psd(const Eigen::MatrixXd& m) {
  const Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::IndefiniteMatrix, "eigendecomposition did not converge");
  return detail::clamped_eigenvalues(es.eigenvalues()).cwiseSqrt().sum();
}

/// ||mu_a - mu_b||^2 + Tr(S_a + S_b - 2 (S_a S_b)^(1/2)). With S_a = V L V^T,
/// the cross term is Tr((W^T S_b W)^(1/2)) for W = V L^(1/2): the same nonzero
/// spectrum as R S_b R with R = S_a^(1/2). Columns of W whose eigenvalue lies
/// within the clamp tolerance of 0 are dropped, so rank-deficient covariances
/// only pay for their rank.
inline double frechet_distance(const GaussianStats& a, const GaussianStats& b) {
  if (a.mu.size() != b.mu.size() || a.sigma.rows() != b.sigma.rows() || a.sigma.rows() != a.mu.size()) {
    throw Error(ErrorCode::DimensionMismatch, "statistics have different dimensions");
  }
  if (a.mu == b.mu && a.sigma == b.sigma) return 0.0;
  detail::require_symmetric(a.sigma);
  detail::require_symmetric(b.sigma);
  const double mean_term = (a.mu - b.mu).squaredNorm();

  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (a.sigma + a.sigma.transpose()));
  if (es.info() != Eigen::Success) throw Error(ErrorCode::IndefiniteMatrix, "eigendecomposition did not converge");
  const Eigen::VectorXd evals = detail::clamped_eigenvalues(es.eigenvalues());
  const double tol = kEigenClampRelative * evals.maxCoeff();
  // Eigenvalues are ascending; keep the tail above the tolerance.
  Eigen::Index first = 0;
  while (first < evals.size() && evals(first) <= tol) ++first;
  const Eigen::Index rank = evals.size() - first;

  double cross = 0.0;
  if (rank > 0) {
    const Eigen::MatrixXd w =
        es.eigenvectors().rightCols(rank) * evals.tail(rank).cwiseSqrt().asDiagonal();
    const Eigen::MatrixXd inner = w.transpose() * b.sigma.selfadjointView<Eigen::Lower>() * w;
    cross = trace_sqrt_psd(inner);
  }
  double fid = mean_term + a.sigma.trace() + b.sigma.trace() - 2.0 * cross;
  if (fid < 0.0 && fid > -1e-6) fid = 0.0;
  return fid;
}

// ---------------------------------------------------------------------------
// PADEMB1: "PADEMB1\0", u32 N, u32 D (little-endian), then N*D little-endian
// float32, row-major.

inline constexpr std::array<char, 8> kPadembMagic = {'P', 'A', 'D', 'E', 'M', 'B', '1', '\0'};

namespace detail {

inline void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFFU));
}

inline std::uint32_t get_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

}  // namespace detail

inline std::string encode_embeddings(const EmbeddingSet& e) {
  if (e.count == 0 || e.dim == 0) throw Error(ErrorCode::DimensionZero, "N and D must be positive");
  if (e.data.size() != static_cast<std::size_t>(e.count) * e.dim) {
    throw Error(ErrorCode::TruncatedFile, "embedding data length does not match N x D");
  }
  std::string out(kPadembMagic.begin(), kPadembMagic.end());
  detail::put_u32(out, e.count);
  detail::put_u32(out, e.dim);
  out.reserve(out.size() + e.data.size() * 4);
  for (float f : e.data) detail::put_u32(out, std::bit_cast<std::uint32_t>(f));
  return out;
}

inline EmbeddingSet decode_embeddings(const std::string& bytes) {
  if (bytes.size() < 8 || !std::equal(kPadembMagic.begin(), kPadembMagic.end(), bytes.begin())) {
    throw Error(ErrorCode::BadMagic, "not a PADEMB1 file");
  }
  if (bytes.size() < 16) throw Error(ErrorCode::TruncatedFile, "header is truncated");
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  EmbeddingSet e;
  e.count = detail::get_u32(p + 8);
  e.dim = detail::get_u32(p + 12);
  if (e.count == 0 || e.dim == 0) throw Error(ErrorCode::DimensionZero, "header declares N or D = 0");
  const std::size_t n = static_cast<std::size_t>(e.count) * e.dim;
  if (bytes.size() - 16 < n * 4) {
    throw Error(ErrorCode::TruncatedFile, "header declares " + std::to_string(e.count) + " x " +
                                              std::to_string(e.dim) + " floats but the payload is shorter");
  }
  e.data.resize(n);
  for (std::size_t i = 0; i < n; ++i) e.data[i] = std::bit_cast<float>(detail::get_u32(p + 16 + 4 * i));
  return e;
}

inline EmbeddingSet read_embeddings(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::FileNotFound, path.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_embeddings(bytes);
}

inline void write_embeddings(const EmbeddingSet& e, const std::filesystem::path& path) {
  write_file_atomic(path, encode_embeddings(e));
}

}  // namespace padbench
