#pragma once

#include <iosfwd>

#include "gimg/decoder.hpp"
#include "gimg/encoder.hpp"

namespace gimg {

/// Shared defaults of every subcommand. Each can be overridden by a flag or
/// by the environment variable named in --help (GIMG_GRID_SIZE, ...).
struct CliConfig {
  int grid_size = 16;
  double origin_x = -64.0;
  double origin_y = -120.0;
  double extent = 128.0;
  double anchor_weight = 1.0;
  int raster_res = 512;
  int margin_cells = 1;
  bool smooth = false;

  GridConfig grid() const;
  DecodeOptions decode_options() const;
};

/// Exit status: 0 success, 1 failed operation (validation, encoding, I/O,
/// round-trip below threshold), 2 usage error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gimg
