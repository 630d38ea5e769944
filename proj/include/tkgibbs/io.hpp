#pragma once

#include <filesystem>
#include <string>

#include "tkgibbs/rejection.hpp"
#include "tkgibbs/stats.hpp"
#include "tkgibbs/types.hpp"

namespace tkgibbs::io {

// Shortest round-trip decimal form (17 significant digits).
std::string format_g17(double v);

void write_text_file(const std::filesystem::path& path, const std::string& content);

// bin_left,bin_right,count
void write_histogram_csv(const std::filesystem::path& path, const EnsembleStats& st);

// k,power
void write_power_csv(const std::filesystem::path& path, const EnsembleStats& st);

// xi,u
void write_field_csv(const std::filesystem::path& path, const WaveField& f);

// sample_id,k,re,im
void write_spectra_csv(const std::filesystem::path& path, const SampleBatch& batch, double E0);

}  // namespace tkgibbs::io
