#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ihd/problems.hpp"

namespace ihd {

namespace {

[[noreturn]] void fail(const std::string& what, std::int64_t offset) {
  std::ostringstream os;
  os << what << " at byte " << offset;
  throw std::runtime_error(os.str());
}

struct HeaderReader {
  const std::vector<char>& buf;
  std::int64_t pos = 0;

  bool eof() const { return pos >= static_cast<std::int64_t>(buf.size()); }
  char peek() const { return buf[pos]; }

  void skip_space_and_comments() {
    while (!eof()) {
      const char c = peek();
      if (c == '#') {
        while (!eof() && peek() != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos;
      } else {
        return;
      }
    }
  }

  long read_number() {
    skip_space_and_comments();
    if (eof()) fail("unexpected end of header", pos);
    if (!std::isdigit(static_cast<unsigned char>(peek())))
      fail("expected a decimal number", pos);
    long v = 0;
    while (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) {
      v = v * 10 + (peek() - '0');
      if (v > 1000000000L) fail("number out of range", pos);
      ++pos;
    }
    return v;
  }
};

}  // namespace

Image pgm_read(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<char> buf((std::istreambuf_iterator<char>(in)),
                        std::istreambuf_iterator<char>());

  HeaderReader rd{buf};
  if (buf.size() < 2 || buf[0] != 'P' || buf[1] != '5')
    fail("not a binary PGM (expected magic P5)", 0);
  rd.pos = 2;
  const long nx = rd.read_number();
  const long ny = rd.read_number();
  const long maxval = rd.read_number();
  if (nx < 1 || ny < 1) fail("image dimensions must be positive", rd.pos);
  if (maxval != 255 && maxval != 65535) fail("maxval must be 255 or 65535", rd.pos);
  if (rd.eof() || !std::isspace(static_cast<unsigned char>(rd.peek())))
    fail("expected single whitespace before pixel data", rd.pos);
  ++rd.pos;

  const int bytes_per = maxval == 255 ? 1 : 2;
  const std::int64_t expected = std::int64_t(nx) * ny * bytes_per;
  const std::int64_t actual = static_cast<std::int64_t>(buf.size()) - rd.pos;
  if (actual < expected) {
    std::ostringstream os;
    os << "truncated pixel data: expected " << expected << " bytes, got " << actual
       << " at byte " << rd.pos;
    throw std::runtime_error(os.str());
  }

  Image img(static_cast<int>(nx), static_cast<int>(ny));
  const unsigned char* p = reinterpret_cast<const unsigned char*>(buf.data()) + rd.pos;
  const double scale = 1.0 / maxval;
  for (std::int64_t i = 0; i < std::int64_t(nx) * ny; ++i) {
    if (bytes_per == 1) {
      img.pix[i] = p[i] * scale;
    } else {
      img.pix[i] = (static_cast<unsigned>(p[2 * i]) << 8 | p[2 * i + 1]) * scale;
    }
  }
  return img;
}

void pgm_write(const std::string& path, const Image& img) {
  if (img.nx < 1 || img.ny < 1)
    throw std::invalid_argument("cannot write an empty image");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "P5\n" << img.nx << " " << img.ny << "\n255\n";
  std::vector<unsigned char> bytes(img.pix.size());
  for (std::int64_t i = 0; i < img.pix.size(); ++i) {
    const double v = std::min(1.0, std::max(0.0, img.pix[i]));
    bytes[i] = static_cast<unsigned char>(std::lround(v * 255.0));
  }
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace ihd
