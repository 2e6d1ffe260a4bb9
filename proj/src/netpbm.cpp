#include "patchchar/netpbm.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace patchchar {

namespace {

class HeaderReader {
 public:
  explicit HeaderReader(std::string_view bytes) : bytes_(bytes) {}

  std::size_t offset() const { return pos_; }

  // Next whitespace-delimited token; '#' comments run to end of line.
  std::string_view Token() {
    SkipSpaceAndComments();
    const std::size_t start = pos_;
    while (pos_ < bytes_.size() &&
           !std::isspace(static_cast<unsigned char>(bytes_[pos_])) &&
           bytes_[pos_] != '#') {
      ++pos_;
    }
    if (start == pos_) {
      FailAt(start, "unexpected end of header");
    }
    return bytes_.substr(start, pos_ - start);
  }

  long Unsigned(const char* what) {
    SkipSpaceAndComments();
    const std::size_t start = pos_;
    const std::string_view tok = Token();
    long value = 0;
    for (char ch : tok) {
      if (!std::isdigit(static_cast<unsigned char>(ch))) {
        FailAt(start, std::string("expected unsigned integer for ") + what +
                          ", got '" + std::string(tok) + "'");
      }
      value = value * 10 + (ch - '0');
      if (value > (1L << 30)) FailAt(start, std::string(what) + " too large");
    }
    return value;
  }

  // Binary rasters start after exactly one whitespace byte.
  void SingleWhitespace() {
    if (pos_ >= bytes_.size() ||
        !std::isspace(static_cast<unsigned char>(bytes_[pos_]))) {
      FailAt(pos_, "expected single whitespace before raster");
    }
    ++pos_;
  }

  [[noreturn]] void FailAt(std::size_t offset, const std::string& msg) const {
    Fail(ErrorKind::kParse,
         "netpbm parse error at byte " + std::to_string(offset) + ": " + msg);
  }

 private:
  void SkipSpaceAndComments() {
    while (pos_ < bytes_.size()) {
      const char ch = bytes_[pos_];
      if (ch == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(ch))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::string_view bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

GrayImage parse_netpbm(std::string_view bytes) {
  HeaderReader reader(bytes);
  const std::string_view magic = reader.Token();
  if (magic.size() != 2 || magic[0] != 'P' ||
      (magic[1] != '2' && magic[1] != '3' && magic[1] != '5' &&
       magic[1] != '6')) {
    reader.FailAt(0, "unsupported magic '" + std::string(magic) + "'");
  }
  const bool color = magic[1] == '3' || magic[1] == '6';
  const bool binary = magic[1] == '5' || magic[1] == '6';
  const long width = reader.Unsigned("width");
  const long height = reader.Unsigned("height");
  const long maxval = reader.Unsigned("maxval");
  if (maxval == 0) {
    Fail(ErrorKind::kInvalidFormat,
         "netpbm maxval is 0");
  }
  if (maxval > 65535) {
    Fail(ErrorKind::kInvalidFormat,
         "netpbm maxval " + std::to_string(maxval) + " exceeds 65535");
  }
  const std::size_t channels = color ? 3 : 1;
  const std::size_t samples =
      static_cast<std::size_t>(width) * static_cast<std::size_t>(height) *
      channels;

  std::vector<double> raw(samples);
  if (binary) {
    reader.SingleWhitespace();
    const std::size_t bytes_per_sample = maxval < 256 ? 1 : 2;
    const std::size_t expected = samples * bytes_per_sample;
    const std::size_t start = reader.offset();
    const std::size_t received = bytes.size() - start;
    if (received < expected) {
      Fail(ErrorKind::kParse,
           "netpbm raster truncated at byte " + std::to_string(bytes.size()) +
               ": expected " + std::to_string(expected) +
               " bytes, received " + std::to_string(received));
    }
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data()) +
                    start;
    for (std::size_t i = 0; i < samples; ++i) {
      const unsigned v =
          bytes_per_sample == 1 ? p[i] : (p[2 * i] << 8U) | p[2 * i + 1];
      raw[i] = static_cast<double>(v);
    }
  } else {
    for (std::size_t i = 0; i < samples; ++i) {
      raw[i] = static_cast<double>(reader.Unsigned("sample"));
    }
  }
  for (double v : raw) {
    if (v > static_cast<double>(maxval)) {
      Fail(ErrorKind::kInvalidFormat, "netpbm sample exceeds maxval");
    }
  }

  const double scale = 1.0 / static_cast<double>(maxval);
  std::vector<double> gray(static_cast<std::size_t>(width * height));
  for (std::size_t i = 0; i < gray.size(); ++i) {
    if (color) {
      gray[i] = (0.299 * raw[3 * i] + 0.587 * raw[3 * i + 1] +
                 0.114 * raw[3 * i + 2]) *
                scale;
    } else {
      gray[i] = raw[i] * scale;
    }
  }
  return GrayImage::FromRowMajor(height, width, gray);
}

GrayImage load_image(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    Fail(ErrorKind::kIo, "cannot open '" + path.string() + "' for reading");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_netpbm(buffer.str());
}

// Nearest code with exact halves rounded down, so 0.5 maps to 127.
std::uint8_t QuantizeByte(double v) {
  return static_cast<std::uint8_t>(
      std::ceil(std::clamp(v, 0.0, 1.0) * 255.0 - 0.5));
}

void save_codes(Index height, Index width, std::span<const std::uint8_t> codes,
                const std::filesystem::path& path) {
  if (static_cast<Index>(codes.size()) != height * width) {
    Fail(ErrorKind::kDimensionMismatch, "code buffer does not match image");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    Fail(ErrorKind::kIo, "cannot open '" + path.string() + "' for writing");
  }
  out << "P5\n" << width << " " << height << "\n255\n";
  out.write(reinterpret_cast<const char*>(codes.data()),
            static_cast<std::streamsize>(codes.size()));
  if (!out) Fail(ErrorKind::kIo, "write to '" + path.string() + "' failed");
}

void save_image(const GrayImage& img, const std::filesystem::path& path) {
  std::vector<std::uint8_t> codes(static_cast<std::size_t>(img.size()));
  const auto data = img.data();
  std::transform(data.begin(), data.end(), codes.begin(), QuantizeByte);
  save_codes(img.height(), img.width(), codes, path);
}

}  // namespace patchchar
