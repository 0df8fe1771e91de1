#include "newton/data_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>

namespace newton {

const char* to_string(StepStatus status) {
  switch (status) {
    case StepStatus::interior: return "interior";
    case StepStatus::boundary: return "boundary";
    case StepStatus::negative_curvature_exit: return "negative_curvature_exit";
    case StepStatus::eigen_step: return "eigen_step";
    case StepStatus::cauchy_fallback: return "cauchy_fallback";
  }
  return "unknown";
}

namespace {

bool is_blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(),
                     [](unsigned char c) { return std::isspace(c); });
}

double parse_number(const std::string& token, long line_no, const char* what) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(token, &pos);
  } catch (const std::exception&) {
    throw ParseError(std::string("malformed ") + what + " '" + token + "'",
                     line_no);
  }
  if (pos != token.size()) {
    throw ParseError(std::string("trailing characters in ") + what + " '" +
                     token + "'", line_no);
  }
  return v;
}

}  // namespace

Dataset parse_libsvm(std::istream& in, const LibsvmOptions& options) {
  Dataset ds;
  ds.row_ptr.push_back(0);

  std::vector<double> raw_labels;
  Index max_index = -1;  // 0-based
  std::string line;
  long line_no = 0;

  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line) || line[0] == '#') continue;

    std::size_t pos = 0;
    auto next_token = [&]() -> std::string {
      while (pos < line.size() &&
             std::isspace(static_cast<unsigned char>(line[pos]))) {
        ++pos;
      }
      std::size_t start = pos;
      while (pos < line.size() &&
             !std::isspace(static_cast<unsigned char>(line[pos]))) {
        ++pos;
      }
      return line.substr(start, pos - start);
    };

    std::string label_tok = next_token();
    if (label_tok.empty()) continue;
    raw_labels.push_back(parse_number(label_tok, line_no, "label"));

    Index prev_index = -1;
    for (std::string tok = next_token(); !tok.empty(); tok = next_token()) {
      std::size_t colon = tok.find(':');
      if (colon == std::string::npos || colon == 0 ||
          colon + 1 == tok.size()) {
        throw ParseError("malformed feature token '" + tok + "'", line_no);
      }
      double idx_val = parse_number(tok.substr(0, colon), line_no, "index");
      if (idx_val < 1 || idx_val != std::floor(idx_val)) {
        throw ParseError("feature index must be a positive integer, got '" +
                         tok.substr(0, colon) + "'", line_no);
      }
      Index idx = static_cast<Index>(idx_val) - 1;  // to 0-based
      if (idx <= prev_index) {
        throw ParseError("feature indices must be strictly increasing",
                         line_no);
      }
      double value = parse_number(tok.substr(colon + 1), line_no, "value");
      if (!std::isfinite(value)) {
        throw ParseError("non-finite feature value", line_no);
      }
      ds.col_idx.push_back(idx);
      ds.values.push_back(value);
      prev_index = idx;
      max_index = std::max(max_index, idx);
    }
    ds.row_ptr.push_back(ds.values.size());
  }

  ds.n = static_cast<Index>(raw_labels.size());
  ds.d = max_index + 1;
  if (options.dim_override) {
    if (*options.dim_override < ds.d) {
      throw ParseError("dimension override " +
                       std::to_string(*options.dim_override) +
                       " smaller than max feature index " +
                       std::to_string(ds.d), line_no);
    }
    ds.d = *options.dim_override;
  }

  // Map the observed label set onto {0,1}; smaller label becomes 0 unless
  // flipped. Only {0,1}, {-1,+1} and {1,2} (or a subset) are accepted.
  std::set<double> distinct(raw_labels.begin(), raw_labels.end());
  if (distinct.size() > 2) {
    throw ParseError("more than two distinct labels", 1);
  }
  auto admissible = [](double lo, double hi) {
    return (lo == 0 && hi == 1) || (lo == -1 && hi == 1) ||
           (lo == 1 && hi == 2);
  };
  std::map<double, std::uint8_t> mapping;
  if (distinct.size() == 2) {
    double lo = *distinct.begin();
    double hi = *std::next(distinct.begin());
    if (!admissible(lo, hi)) {
      throw ParseError("unsupported label set {" + std::to_string(lo) + ", " +
                       std::to_string(hi) + "}", 1);
    }
    mapping[lo] = options.flip_labels ? 1 : 0;
    mapping[hi] = options.flip_labels ? 0 : 1;
  } else if (distinct.size() == 1) {
    double only = *distinct.begin();
    std::uint8_t base;
    if (only == 0 || only == -1) {
      base = 0;
    } else if (only == 1 || only == 2) {
      base = 1;
    } else {
      throw ParseError("unsupported label value " + std::to_string(only), 1);
    }
    mapping[only] = options.flip_labels ? static_cast<std::uint8_t>(1 - base)
                                        : base;
  }
  ds.labels.reserve(raw_labels.size());
  for (double l : raw_labels) ds.labels.push_back(mapping[l]);

  if (options.scale_features && ds.d > 0) {
    std::vector<double> max_abs(static_cast<std::size_t>(ds.d), 0.0);
    for (std::size_t k = 0; k < ds.values.size(); ++k) {
      max_abs[ds.col_idx[k]] =
          std::max(max_abs[ds.col_idx[k]], std::abs(ds.values[k]));
    }
    for (std::size_t k = 0; k < ds.values.size(); ++k) {
      if (max_abs[ds.col_idx[k]] > 0) ds.values[k] /= max_abs[ds.col_idx[k]];
    }
  }
  return ds;
}

Dataset parse_libsvm_file(const std::string& path,
                          const LibsvmOptions& options) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open dataset file: " + path);
  return parse_libsvm(in, options);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_trace_csv(const Trace& trace, std::ostream& out) {
  if (trace.empty()) throw UsageError("write_trace_csv: empty trace");
  out << "iter,props,loss,grad_norm,radius_or_sigma,rho,success,step_norm,"
         "inner_iters,lambda_hat,wall_ms\n";
  for (const TraceRecord& r : trace) {
    out << r.iteration << ',' << r.props << ',' << format_double(r.loss) << ','
        << format_double(r.grad_norm) << ','
        << format_double(r.radius_or_sigma) << ',' << format_double(r.rho)
        << ',' << (r.success ? 1 : 0) << ',' << format_double(r.step_norm)
        << ',' << r.inner_iterations << ',' << format_double(r.lambda_hat)
        << ',' << format_double(r.wall_ms) << '\n';
  }
  if (!out) throw NumericalError("write_trace_csv: stream write failed");
}

void write_trace_csv_file(const Trace& trace, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot open trace output file: " + path);
  write_trace_csv(trace, out);
  out.flush();
  if (!out) throw NumericalError("write_trace_csv: file write failed");
}

}  // namespace newton
