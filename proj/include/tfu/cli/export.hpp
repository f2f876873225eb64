#pragma once

#include <filesystem>
#include <string>

#include "tfu/core.hpp"

namespace tfu::cli {

/// CSV with header "x,xi,re,im,abs", one row per node in row-major order,
/// 17 significant digits, LF line endings.
std::string format_tfarray_csv(const TFArray& V);
void export_tfarray(const TFArray& V, const std::filesystem::path& path);

/// Reads a file written by export_tfarray back into a TFArray; the grid is
/// reconstructed from the node coordinates.
TFArray import_tfarray(const std::filesystem::path& path);

}  // namespace tfu::cli
