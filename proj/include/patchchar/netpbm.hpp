#pragma once

#include <filesystem>

#include "patchchar/image.hpp"

namespace patchchar {

// Reads P2/P5 (gray) and P3/P6 (color, converted with 0.299/0.587/0.114
// luminance weights). Samples are scaled by maxval into [0,1].
GrayImage load_image(const std::filesystem::path& path);

// Parses an in-memory netpbm buffer; load_image is a thin wrapper.
GrayImage parse_netpbm(std::string_view bytes);

// Binary P5, maxval 255, byte = round(v * 255).
void save_image(const GrayImage& img, const std::filesystem::path& path);

// Writes raw 8-bit codes as P5 without any rescaling (label maps, masks).
void save_codes(Index height, Index width, std::span<const std::uint8_t> codes,
                const std::filesystem::path& path);

std::uint8_t QuantizeByte(double v);

}  // namespace patchchar
