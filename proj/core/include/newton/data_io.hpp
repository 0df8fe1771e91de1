#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "newton/common.hpp"
#include "newton/trace.hpp"

namespace newton {

/// Sparse row-major design matrix with binary labels. Column indices are
/// 0-based and strictly increasing within each row. Immutable once built;
/// safe to share across threads.
struct Dataset {
  Index n = 0;  // rows
  Index d = 0;  // feature dimension
  std::vector<std::size_t> row_ptr;  // n + 1 offsets into col_idx/values
  std::vector<Index> col_idx;
  std::vector<double> values;
  std::vector<std::uint8_t> labels;  // each 0 or 1

  std::size_t row_nnz(Index i) const { return row_ptr[i + 1] - row_ptr[i]; }

  /// <x_i, w>
  double row_dot(Index i, const Vector& w) const {
    double acc = 0.0;
    for (std::size_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k) {
      acc += values[k] * w[col_idx[k]];
    }
    return acc;
  }

  /// out += c * x_i
  void row_axpy(Index i, double c, Vector& out) const {
    for (std::size_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k) {
      out[col_idx[k]] += c * values[k];
    }
  }

  double row_squared_norm(Index i) const {
    double acc = 0.0;
    for (std::size_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k) {
      acc += values[k] * values[k];
    }
    return acc;
  }
};

struct LibsvmOptions {
  /// Force the feature dimension instead of using the maximum index seen.
  std::optional<Index> dim_override;
  /// Per-feature max-abs scaling applied at ingestion.
  bool scale_features = false;
  /// Invert the default smaller-label-to-0 mapping.
  bool flip_labels = false;
};

/// Parses LIBSVM text: `label idx:val idx:val ...` with 1-based indices.
/// Accepted label sets are {0,1} (kept), {-1,+1} and {1,2} (mapped with
/// smaller value to 0 unless flipped). Lines starting with '#' are skipped.
/// Duplicate or non-increasing indices within a line are rejected.
Dataset parse_libsvm(std::istream& in, const LibsvmOptions& options = {});
Dataset parse_libsvm_file(const std::string& path,
                          const LibsvmOptions& options = {});

/// Writes `iter,props,loss,grad_norm,radius_or_sigma,rho,success,step_norm,
/// inner_iters,lambda_hat,wall_ms` with round-trip float formatting.
void write_trace_csv(const Trace& trace, std::ostream& out);
void write_trace_csv_file(const Trace& trace, const std::string& path);

/// 17-significant-digit formatting; parse-back reproduces the double bitwise.
std::string format_double(double v);

}  // namespace newton
