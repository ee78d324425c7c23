#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "remi/selection.hpp"
#include "remi/types.hpp"

namespace remi {

// ---------------------------------------------------------------------------
// Number formatting: locale-free, shortest representation that reparses to
// the identical bits. All text formats rely on this for their round trips.
// ---------------------------------------------------------------------------

inline std::string fmt_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s, long line) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    std::ostringstream os;
    os << "malformed number '" << s << "' at line " << line;
    throw Error(ErrorCode::MalformedRow, os.str(), line);
  }
  return v;
}

inline long parse_long(std::string_view s, long line) {
  long v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    std::ostringstream os;
    os << "malformed integer '" << s << "' at line " << line;
    throw Error(ErrorCode::MalformedRow, os.str(), line);
  }
  return v;
}

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r'))
      ++i;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r')
      ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

inline std::vector<std::string_view> split_char(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == sep) {
      std::string_view f = line.substr(start, i - start);
      if (!f.empty() && f.back() == '\r') f.remove_suffix(1);
      out.push_back(f);
      start = i + 1;
    }
  }
  return out;
}

inline std::ifstream open_in(const std::string& path, bool binary = false) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path);
  return in;
}

inline std::ofstream open_out(const std::string& path, bool binary = false) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path);
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Summary statistics: TSV with header `id beta se n`. Row order defines the
// variable index; a single shared n is required.
// ---------------------------------------------------------------------------

inline void write_summary_file(const std::string& path, const SummaryStats& s) {
  auto out = detail::open_out(path);
  out << "id\tbeta\tse\tn\n";
  for (Index j = 0; j < s.size(); ++j)
    out << "v" << j << '\t' << fmt_double(s.beta_m[j]) << '\t'
        << fmt_double(std::sqrt(s.s2[j])) << '\t' << s.n << '\n';
}

inline SummaryStats parse_summary_file(const std::string& path) {
  auto in = detail::open_in(path);
  std::string line;
  if (!std::getline(in, line))
    throw Error(ErrorCode::MalformedRow, "empty summary file " + path, 1);
  {
    const auto h = detail::split_ws(line);
    if (h.size() != 4 || h[0] != "id" || h[1] != "beta" || h[2] != "se" || h[3] != "n")
      throw Error(ErrorCode::MalformedRow, "expected header 'id beta se n' in " + path, 1);
  }
  std::vector<double> beta, s2;
  long n = -1;
  long lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = detail::split_ws(line);
    if (f.size() != 4) {
      std::ostringstream os;
      os << "expected 4 fields, got " << f.size() << " at line " << lineno;
      throw Error(ErrorCode::MalformedRow, os.str(), lineno);
    }
    const double b = parse_double(f[1], lineno);
    const double se = parse_double(f[2], lineno);
    const long rn = parse_long(f[3], lineno);
    if (!(se > 0.0) || !std::isfinite(se)) {
      std::ostringstream os;
      os << "standard error not strictly positive at line " << lineno;
      throw Error(ErrorCode::NonPositiveSE, os.str(), lineno);
    }
    if (n < 0) {
      n = rn;
    } else if (n != rn) {
      std::ostringstream os;
      os << "inconsistent n (" << rn << " vs " << n << ") at line " << lineno;
      throw Error(ErrorCode::InconsistentN, os.str(), lineno);
    }
    beta.push_back(b);
    s2.push_back(se * se);
  }
  if (beta.empty())
    throw Error(ErrorCode::MalformedRow, "no data rows in " + path, lineno);
  SummaryStats s;
  s.n = n;
  s.beta_m = Eigen::Map<const VectorXd>(beta.data(), static_cast<Index>(beta.size()));
  s.s2 = Eigen::Map<const VectorXd>(s2.data(), static_cast<Index>(s2.size()));
  return s;
}

// Marginal inner products: TSV with header `id ytilde n`.

inline void write_marginal_file(const std::string& path, const MarginalVector& m) {
  auto out = detail::open_out(path);
  out << "id\tytilde\tn\n";
  for (Index j = 0; j < m.values.size(); ++j)
    out << "v" << j << '\t' << fmt_double(m.values[j]) << '\t' << m.n << '\n';
}

inline MarginalVector parse_marginal_file(const std::string& path) {
  auto in = detail::open_in(path);
  std::string line;
  if (!std::getline(in, line))
    throw Error(ErrorCode::MalformedRow, "empty marginal file " + path, 1);
  {
    const auto h = detail::split_ws(line);
    if (h.size() != 3 || h[0] != "id" || h[1] != "ytilde" || h[2] != "n")
      throw Error(ErrorCode::MalformedRow, "expected header 'id ytilde n' in " + path, 1);
  }
  std::vector<double> values;
  long n = -1;
  long lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = detail::split_ws(line);
    if (f.size() != 3) {
      std::ostringstream os;
      os << "expected 3 fields, got " << f.size() << " at line " << lineno;
      throw Error(ErrorCode::MalformedRow, os.str(), lineno);
    }
    values.push_back(parse_double(f[1], lineno));
    const long rn = parse_long(f[2], lineno);
    if (n < 0) {
      n = rn;
    } else if (n != rn) {
      std::ostringstream os;
      os << "inconsistent n (" << rn << " vs " << n << ") at line " << lineno;
      throw Error(ErrorCode::InconsistentN, os.str(), lineno);
    }
  }
  if (values.empty())
    throw Error(ErrorCode::MalformedRow, "no data rows in " + path, lineno);
  MarginalVector m;
  m.n = n;
  m.values = Eigen::Map<const VectorXd>(values.data(), static_cast<Index>(values.size()));
  return m;
}

// ---------------------------------------------------------------------------
// Matrices: whitespace-delimited text with constant row width, or a binary
// container (magic `REMI1`, u64 rows, u64 cols, row-major little-endian f64)
// that round-trips bit-exactly. The parser dispatches on the magic.
// ---------------------------------------------------------------------------

inline void write_matrix_text(const std::string& path, const MatrixXd& m) {
  auto out = detail::open_out(path);
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) out << ' ';
      out << fmt_double(m(i, j));
    }
    out << '\n';
  }
}

inline void write_matrix_binary(const std::string& path, const MatrixXd& m) {
  auto out = detail::open_out(path, true);
  out.write("REMI1", 5);
  const std::uint64_t rows = static_cast<std::uint64_t>(m.rows());
  const std::uint64_t cols = static_cast<std::uint64_t>(m.cols());
  out.write(reinterpret_cast<const char*>(&rows), 8);
  out.write(reinterpret_cast<const char*>(&cols), 8);
  std::vector<double> row(m.cols());
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) row[static_cast<std::size_t>(j)] = m(i, j);
    out.write(reinterpret_cast<const char*>(row.data()),
              static_cast<std::streamsize>(sizeof(double) * row.size()));
  }
  if (!out) throw Error(ErrorCode::IoFailure, "short write to " + path);
}

inline MatrixXd parse_matrix_file(const std::string& path) {
  auto in = detail::open_in(path, true);
  char magic[5] = {0, 0, 0, 0, 0};
  in.read(magic, 5);
  const std::streamsize got = in.gcount();
  if (got >= 4 && std::memcmp(magic, "REMI", 4) == 0) {
    if (got < 5 || magic[4] != '1')
      throw Error(ErrorCode::BadMagic, "unsupported matrix container version in " + path);
    std::uint64_t rows = 0, cols = 0;
    in.read(reinterpret_cast<char*>(&rows), 8);
    in.read(reinterpret_cast<char*>(&cols), 8);
    if (in.gcount() != 8)
      throw Error(ErrorCode::TruncatedPayload, "truncated header in " + path);
    MatrixXd m(static_cast<Index>(rows), static_cast<Index>(cols));
    std::vector<double> row(cols);
    for (std::uint64_t i = 0; i < rows; ++i) {
      in.read(reinterpret_cast<char*>(row.data()),
              static_cast<std::streamsize>(sizeof(double) * cols));
      if (static_cast<std::uint64_t>(in.gcount()) != sizeof(double) * cols)
        throw Error(ErrorCode::TruncatedPayload, "truncated payload in " + path);
      for (std::uint64_t j = 0; j < cols; ++j)
        m(static_cast<Index>(i), static_cast<Index>(j)) = row[j];
    }
    return m;
  }

  // text fallback
  in.clear();
  in.seekg(0);
  std::string line;
  std::vector<std::vector<double>> rows;
  long lineno = 0;
  Index width = -1;
  while (std::getline(in, line)) {
    ++lineno;
    const auto f = detail::split_ws(line);
    if (f.empty()) continue;
    if (width < 0) width = static_cast<Index>(f.size());
    if (static_cast<Index>(f.size()) != width) {
      std::ostringstream os;
      os << "row width " << f.size() << " differs from " << width << " at line "
         << lineno;
      throw Error(ErrorCode::RaggedRows, os.str(), lineno);
    }
    std::vector<double> row;
    row.reserve(f.size());
    for (const auto& field : f) row.push_back(parse_double(field, lineno));
    rows.push_back(std::move(row));
  }
  if (rows.empty())
    throw Error(ErrorCode::MalformedRow, "no rows in matrix file " + path, lineno);
  MatrixXd m(static_cast<Index>(rows.size()), width);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (Index j = 0; j < width; ++j) m(static_cast<Index>(i), j) = rows[i][j];
  return m;
}

inline void write_vector_binary(const std::string& path, const VectorXd& v) {
  write_matrix_binary(path, v);
}

inline VectorXd parse_vector_file(const std::string& path) {
  const MatrixXd m = parse_matrix_file(path);
  if (m.cols() != 1)
    throw Error(ErrorCode::DimensionMismatch, "expected a single-column matrix in " + path);
  return m.col(0);
}

// ---------------------------------------------------------------------------
// Block partition: one `start end` pair per line.
// ---------------------------------------------------------------------------

inline void write_partition_file(const std::string& path, const BlockPartition& part) {
  auto out = detail::open_out(path);
  for (const auto& r : part.blocks) out << r.start << ' ' << r.end << '\n';
}

inline BlockPartition parse_partition_file(const std::string& path) {
  auto in = detail::open_in(path);
  std::string line;
  BlockPartition part;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto f = detail::split_ws(line);
    if (f.empty()) continue;
    if (f.size() != 2) {
      std::ostringstream os;
      os << "expected 'start end' at line " << lineno;
      throw Error(ErrorCode::MalformedRow, os.str(), lineno);
    }
    part.blocks.push_back({static_cast<Index>(parse_long(f[0], lineno)),
                           static_cast<Index>(parse_long(f[1], lineno))});
  }
  const ValidationReport rep = validate(part);
  if (!rep.ok())
    throw Error(ErrorCode::InvalidArgument, path + ": " + rep.joined());
  return part;
}

// ---------------------------------------------------------------------------
// Sparse effect vectors: `#p <p>` then TSV header `index value`.
// ---------------------------------------------------------------------------

inline void write_effects_file(const std::string& path, const SparseCoefs& beta) {
  auto out = detail::open_out(path);
  out << "#p\t" << beta.p << '\n';
  out << "index\tvalue\n";
  for (Index k = 0; k < beta.nnz(); ++k)
    out << beta.index[k] << '\t' << fmt_double(beta.value[k]) << '\n';
}

inline SparseCoefs parse_effects_file(const std::string& path) {
  auto in = detail::open_in(path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("#p", 0) != 0)
    throw Error(ErrorCode::MalformedRow, "missing #p header in " + path, 1);
  const auto head = detail::split_ws(std::string_view(line).substr(2));
  if (head.size() != 1)
    throw Error(ErrorCode::MalformedRow, "malformed #p header in " + path, 1);
  SparseCoefs beta;
  beta.p = static_cast<Index>(parse_long(head[0], 1));
  std::getline(in, line);  // column header
  long lineno = 2;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = detail::split_ws(line);
    if (f.size() != 2) {
      std::ostringstream os;
      os << "expected 'index value' at line " << lineno;
      throw Error(ErrorCode::MalformedRow, os.str(), lineno);
    }
    beta.index.push_back(static_cast<Index>(parse_long(f[0], lineno)));
    beta.value.push_back(parse_double(f[1], lineno));
  }
  return beta;
}

// ---------------------------------------------------------------------------
// Coefficient path: CSV `lambda,index,value,converged,objective`. Every grid
// point emits a marker row with index -1 (so empty solutions and the
// convergence flag survive), followed by one row per nonzero coefficient.
// ---------------------------------------------------------------------------

inline void write_path_file(const std::string& path, const CoefficientPath& cp) {
  auto out = detail::open_out(path);
  out << "lambda,index,value,converged,objective\n";
  for (Index l = 0; l < cp.size(); ++l) {
    const char* conv = cp.converged[l] ? "true" : "false";
    out << fmt_double(cp.lambdas[l]) << ",-1,0," << conv << ','
        << fmt_double(cp.objective[l]) << '\n';
    const SparseCoefs& c = cp.coefs[l];
    for (Index k = 0; k < c.nnz(); ++k)
      out << fmt_double(cp.lambdas[l]) << ',' << c.index[k] << ','
          << fmt_double(c.value[k]) << ',' << conv << ','
          << fmt_double(cp.objective[l]) << '\n';
  }
}

inline CoefficientPath parse_path_file(const std::string& path, Index p) {
  auto in = detail::open_in(path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("lambda,index,value,converged", 0) != 0)
    throw Error(ErrorCode::MalformedRow, "missing path header in " + path, 1);
  CoefficientPath cp;
  std::vector<double> lambdas, objective;
  long lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = detail::split_char(line, ',');
    if (f.size() != 5) {
      std::ostringstream os;
      os << "expected 5 fields at line " << lineno;
      throw Error(ErrorCode::MalformedRow, os.str(), lineno);
    }
    const double lambda = parse_double(f[0], lineno);
    const long index = parse_long(f[1], lineno);
    const double value = parse_double(f[2], lineno);
    const bool conv = f[3] == "true";
    const double obj = parse_double(f[4], lineno);
    if (index < 0) {
      lambdas.push_back(lambda);
      objective.push_back(obj);
      cp.coefs.emplace_back();
      cp.coefs.back().p = p;
      cp.converged.push_back(conv ? 1 : 0);
    } else {
      if (lambdas.empty() || lambda != lambdas.back())
        throw Error(ErrorCode::MalformedRow, "coefficient row before its marker row",
                    lineno);
      cp.coefs.back().index.push_back(static_cast<Index>(index));
      cp.coefs.back().value.push_back(value);
    }
  }
  cp.lambdas = Eigen::Map<const VectorXd>(lambdas.data(), static_cast<Index>(lambdas.size()));
  cp.objective =
      Eigen::Map<const VectorXd>(objective.data(), static_cast<Index>(objective.size()));
  for (const auto& c : cp.coefs) cp.df.push_back(c.nnz());
  return cp;
}

// BIC table: CSV `lambda,loss,df,bic,chosen`.

inline void write_bic_file(const std::string& path, const BicTable& t) {
  auto out = detail::open_out(path);
  out << "lambda,loss,df,bic,chosen\n";
  for (Index l = 0; l < t.lambdas.size(); ++l)
    out << fmt_double(t.lambdas[l]) << ',' << fmt_double(t.loss[l]) << ','
        << t.df[l] << ',' << fmt_double(t.bic[l]) << ','
        << (l == t.chosen ? 1 : 0) << '\n';
}

inline BicTable parse_bic_file(const std::string& path) {
  auto in = detail::open_in(path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("lambda,loss,df,bic,chosen", 0) != 0)
    throw Error(ErrorCode::MalformedRow, "missing BIC header in " + path, 1);
  BicTable t;
  std::vector<double> lambdas, loss, bic;
  long lineno = 1;
  bool has_chosen = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = detail::split_char(line, ',');
    if (f.size() != 5) {
      std::ostringstream os;
      os << "expected 5 fields at line " << lineno;
      throw Error(ErrorCode::MalformedRow, os.str(), lineno);
    }
    lambdas.push_back(parse_double(f[0], lineno));
    loss.push_back(parse_double(f[1], lineno));
    t.df.push_back(static_cast<Index>(parse_long(f[2], lineno)));
    bic.push_back(parse_double(f[3], lineno));
    if (parse_long(f[4], lineno) != 0) {
      t.chosen = static_cast<Index>(lambdas.size()) - 1;
      has_chosen = true;
    }
  }
  if (!has_chosen)
    throw Error(ErrorCode::MalformedRow, "no chosen row in " + path, lineno);
  t.lambdas = Eigen::Map<const VectorXd>(lambdas.data(), static_cast<Index>(lambdas.size()));
  t.loss = Eigen::Map<const VectorXd>(loss.data(), static_cast<Index>(loss.size()));
  t.bic = Eigen::Map<const VectorXd>(bic.data(), static_cast<Index>(bic.size()));
  return t;
}

}  // namespace remi
