#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mandeldecor/render.hpp"

namespace mandeldecor {

enum class ImageFormat { ppm, png };

// "ppm", "p6", "png" (case-insensitive). Throws std::invalid_argument otherwise.
ImageFormat parse_image_format(const std::string& name);
// From the file extension; .ppm and .png only.
ImageFormat format_from_path(const std::string& path);

bool png_supported();

std::vector<std::uint8_t> encode_ppm(const Raster& raster);
Raster decode_ppm(const std::vector<std::uint8_t>& bytes);

// Errors carry the path. PNG throws std::runtime_error when libpng was not available at build.
void write_image(const Raster& raster, const std::string& path, ImageFormat format);
Raster read_image(const std::string& path);

}  // namespace mandeldecor
