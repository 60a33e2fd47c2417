#include <png.h>

#include <cctype>
#include <cstring>
#include <fstream>
#include <sstream>

#include "sulfation/geometry.hpp"

namespace sulfation {

namespace {

// Next whitespace-delimited header token, skipping '#' comments.
std::string pgm_token(std::istream& in) {
  std::string tok;
  int ch;
  while ((ch = in.get()) != EOF) {
    if (ch == '#') {
      while ((ch = in.get()) != EOF && ch != '\n') {
      }
      continue;
    }
    if (std::isspace(ch)) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(char(ch));
  }
  return tok;
}

int pgm_int(std::istream& in, const std::string& path) {
  const std::string tok = pgm_token(in);
  try {
    std::size_t used = 0;
    const int v = std::stoi(tok, &used);
    if (used == tok.size() && v >= 0) return v;
  } catch (const std::exception&) {
  }
  throw SolverError(ErrorCode::Io, "bad PGM header field '" + tok + "' in " + path);
}

GrayImage read_pgm(std::istream& in, const std::string& path) {
  const std::string magic = pgm_token(in);
  GrayImage img;
  img.width = pgm_int(in, path);
  img.height = pgm_int(in, path);
  const int maxval = pgm_int(in, path);
  if (img.width == 0 || img.height == 0 || maxval == 0 || maxval > 65535) {
    throw SolverError(ErrorCode::Io, "bad PGM dimensions in " + path);
  }
  const std::size_t count = std::size_t(img.width) * std::size_t(img.height);
  img.pixels.resize(count);
  auto scale = [maxval](unsigned v) { return std::uint8_t((v * 255u + unsigned(maxval) / 2u) / unsigned(maxval)); };
  if (magic == "P2") {
    for (std::size_t k = 0; k < count; ++k) img.pixels[k] = scale(unsigned(pgm_int(in, path)));
  } else {
    const int bytes = maxval < 256 ? 1 : 2;
    std::vector<unsigned char> raw(count * std::size_t(bytes));
    in.read(reinterpret_cast<char*>(raw.data()), std::streamsize(raw.size()));
    if (std::size_t(in.gcount()) != raw.size()) throw SolverError(ErrorCode::Io, "truncated PGM data in " + path);
    for (std::size_t k = 0; k < count; ++k) {
      const unsigned v = bytes == 1 ? raw[k] : (unsigned(raw[2 * k]) << 8) | raw[2 * k + 1];
      img.pixels[k] = scale(v);
    }
  }
  return img;
}

GrayImage read_png(const std::string& path) {
  png_image png;
  std::memset(&png, 0, sizeof png);
  png.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&png, path.c_str())) {
    throw SolverError(ErrorCode::Io, "cannot read PNG " + path + ": " + png.message);
  }
  png.format = PNG_FORMAT_GRAY;
  GrayImage img;
  img.width = int(png.width);
  img.height = int(png.height);
  img.pixels.resize(PNG_IMAGE_SIZE(png));
  if (!png_image_finish_read(&png, nullptr, img.pixels.data(), 0, nullptr)) {
    png_image_free(&png);
    throw SolverError(ErrorCode::Io, "cannot decode PNG " + path + ": " + png.message);
  }
  return img;
}

}  // namespace

GrayImage read_image(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SolverError(ErrorCode::Io, "cannot open " + path);
  char head[8] = {};
  in.read(head, 8);
  const std::streamsize got = in.gcount();
  if (got >= 8 && png_sig_cmp(reinterpret_cast<png_const_bytep>(head), 0, 8) == 0) {
    in.close();
    return read_png(path);
  }
  if (got >= 2 && head[0] == 'P' && (head[1] == '2' || head[1] == '5')) {
    in.clear();
    in.seekg(0);
    return read_pgm(in, path);
  }
  throw SolverError(ErrorCode::Io, "unsupported image format: " + path);
}

void write_pgm(const GrayImage& image, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SolverError(ErrorCode::Io, "cannot write " + path);
  out << "P5\n" << image.width << ' ' << image.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(image.pixels.data()), std::streamsize(image.pixels.size()));
  if (!out) throw SolverError(ErrorCode::Io, "write failed: " + path);
}

}  // namespace sulfation
