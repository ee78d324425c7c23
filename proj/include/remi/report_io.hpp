#pragma once

#include "remi/experiment.hpp"
#include "remi/io.hpp"
#include "remi/metrics.hpp"

namespace remi {

/// Experiment table, one row per (n, n_r) cell:
/// n,n_r,rep_count,median_l2,q25,q75,median_pauc,median_pearson
inline void write_scaling_file(const std::string& path,
                               const std::vector<CellResult>& cells) {
  auto out = detail::open_out(path);
  out << "n,n_r,rep_count,median_l2,q25,q75,median_pauc,median_pearson\n";
  for (const auto& cell : cells)
    for (const auto& st : cell.stats)
      out << cell.n << ',' << cell.n_r << ',' << st.rep_count << ','
          << fmt_double(st.median_l2) << ',' << fmt_double(st.q25_l2) << ','
          << fmt_double(st.q75_l2) << ',' << fmt_double(st.median_pauc) << ','
          << fmt_double(st.median_pearson) << '\n';
}

inline void write_eval_file(const std::string& path, const EvalReport& r) {
  auto out = detail::open_out(path);
  out << "partial_auc,pearson_r,l2_error,support_precision,support_recall\n";
  out << fmt_double(r.partial_auc) << ',' << fmt_double(r.pearson_r) << ','
      << fmt_double(r.l2_error) << ',' << fmt_double(r.support_precision) << ','
      << fmt_double(r.support_recall) << '\n';
}

}  // namespace remi
