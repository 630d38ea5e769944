#include "tkgibbs/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "tkgibbs/spectral.hpp"

namespace tkgibbs::io {

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::usage, "cannot open output file " + path.string());
  out << content;
  if (!out.flush()) throw Error(Errc::usage, "write failed for " + path.string());
}

void write_histogram_csv(const std::filesystem::path& path, const EnsembleStats& st) {
  std::ostringstream os;
  os << "bin_left,bin_right,count\n";
  for (std::size_t b = 0; b < st.counts.size(); ++b)
    os << format_g17(st.bin_edges[b]) << ',' << format_g17(st.bin_edges[b + 1]) << ','
       << st.counts[b] << '\n';
  write_text_file(path, os.str());
}

void write_power_csv(const std::filesystem::path& path, const EnsembleStats& st) {
  std::ostringstream os;
  os << "k,power\n";
  for (std::size_t k = 0; k < st.mean_power.size(); ++k)
    os << (k + 1) << ',' << format_g17(st.mean_power[k]) << '\n';
  write_text_file(path, os.str());
}

void write_field_csv(const std::filesystem::path& path, const WaveField& f) {
  std::ostringstream os;
  os << "xi,u\n";
  for (std::size_t j = 0; j < f.xi.size(); ++j)
    os << format_g17(f.xi[j]) << ',' << format_g17(f.u[j]) << '\n';
  write_text_file(path, os.str());
}

void write_spectra_csv(const std::filesystem::path& path, const SampleBatch& batch, double E0) {
  std::ostringstream os;
  os << "sample_id,k,re,im\n";
  for (std::size_t i = 0; i < batch.accepted.size(); ++i) {
    Spectrum s = sphere_to_spectrum(batch.accepted[i], E0);
    for (int k = 1; k <= s.K(); ++k)
      os << i << ',' << k << ',' << format_g17(s.modes[k - 1].real()) << ','
         << format_g17(s.modes[k - 1].imag()) << '\n';
  }
  write_text_file(path, os.str());
}

}  // namespace tkgibbs::io
