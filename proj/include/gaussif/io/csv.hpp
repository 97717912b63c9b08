#pragma once

#include <charconv>
#include <ostream>
#include <string>
#include <system_error>

#include "gaussif/classify.hpp"
#include "gaussif/ext_real.hpp"
#include "gaussif/wigner.hpp"

namespace gaussif::io {

/// Shortest decimal string that round-trips to the same double.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  if (res.ec != std::errc{}) return "nan";
  return {buf, res.ptr};
}

inline std::string format_ext(const ExtReal& v) {
  return v.is_infinite() ? "inf" : format_double(v.value());
}

/// Header comment; every CSV we write starts with the resolved config.
inline void write_comment(std::ostream& os, const std::string& text) {
  os << "# " << text << '\n';
}

inline void write_wigner_csv(std::ostream& os, const WignerGrid& w) {
  os << "t,xi,W\n";
  for (std::size_t i = 0; i < w.times.size(); ++i)
    for (std::size_t j = 0; j < w.freqs.size(); ++j)
      os << format_double(w.times[i]) << ',' << format_double(w.freqs[j]) << ','
         << format_double(w.at(i, j)) << '\n';
}

inline void write_freq_atoms_header(std::ostream& os) { os << "t,xi,re_w,im_w\n"; }

inline void write_freq_atoms_rows(std::ostream& os, const FreqAtomMeasure& m) {
  for (const auto& a : m.atoms)
    os << format_double(m.t) << ',' << format_double(a.xi) << ',' << format_double(a.weight.real())
       << ',' << format_double(a.weight.imag()) << '\n';
}

inline void write_partition_csv(std::ostream& os, const TimePartition& p) {
  os << "t,regime,delta,a,b_over_a\n";
  for (std::size_t i = 0; i < p.grid.size(); ++i) {
    const IFParams& q = p.params[i];
    os << format_double(p.grid[i]) << ',' << to_string(p.labels[i]) << ','
       << format_double(q.delta) << ',' << format_double(q.a) << ','
       << (p.labels[i] == Regime::InfiniteIF ? std::string("inf") : format_double(q.b / q.a))
       << '\n';
  }
}

}  // namespace gaussif::io
