#include "sspnp/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <vector>

namespace sspnp::io {

namespace {

std::string lower_extension(const std::string& path) {
  const auto dot = path.find_last_of('.');
  if (dot == std::string::npos) return "";
  std::string ext = path.substr(dot + 1);
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

struct FileCloser {
  void operator()(FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<FILE, FileCloser>;

Image load_png(const std::string& path) {
  FilePtr fp(std::fopen(path.c_str(), "rb"));
  if (!fp) throw std::runtime_error("load_image: cannot open " + path);

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw std::runtime_error("load_image: png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw std::runtime_error("load_image: png_create_info_struct failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw std::runtime_error("load_image: corrupt or truncated PNG: " + path);
  }

  png_init_io(png, fp.get());
  png_read_info(png, info);

  const png_byte color_type = png_get_color_type(png, info);
  const png_byte bit_depth = png_get_bit_depth(png, info);

  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  png_set_strip_alpha(png);
  if (bit_depth == 16) png_set_swap(png);  // stream is big-endian; we read LE words
  png_read_update_info(png, info);

  const int h = static_cast<int>(png_get_image_height(png, info));
  const int w = static_cast<int>(png_get_image_width(png, info));
  const int channels = png_get_channels(png, info);
  const int depth = png_get_bit_depth(png, info);
  const size_t row_bytes = png_get_rowbytes(png, info);

  std::vector<std::vector<png_byte>> rows(static_cast<size_t>(h),
                                          std::vector<png_byte>(row_bytes));
  std::vector<png_bytep> row_ptrs(static_cast<size_t>(h));
  for (int y = 0; y < h; ++y) row_ptrs[static_cast<size_t>(y)] = rows[static_cast<size_t>(y)].data();
  png_read_image(png, row_ptrs.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  Image img(h, w, channels);
  const double scale = depth == 16 ? 65535.0 : 255.0;
  for (int y = 0; y < h; ++y) {
    const png_byte* row = rows[static_cast<size_t>(y)].data();
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < channels; ++c) {
        double v;
        if (depth == 16) {
          uint16_t word;
          std::memcpy(&word, row + (static_cast<size_t>(x) * channels + c) * 2, 2);
          v = word;
        } else {
          v = row[static_cast<size_t>(x) * channels + c];
        }
        img.at(y, x, c) = v / scale;
      }
    }
  }
  return img;
}

void save_png(const Image& img, const std::string& path) {
  FilePtr fp(std::fopen(path.c_str(), "wb"));
  if (!fp) throw std::runtime_error("save_image: cannot open " + path);

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw std::runtime_error("save_image: png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw std::runtime_error("save_image: png_create_info_struct failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw std::runtime_error("save_image: write failed: " + path);
  }

  const int color_type = img.channels() == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB;
  if (img.channels() != 1 && img.channels() != 3) {
    png_destroy_write_struct(&png, &info);
    throw std::invalid_argument("save_image: only 1- or 3-channel images");
  }

  png_init_io(png, fp.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(img.width()),
               static_cast<png_uint_32>(img.height()), 8, color_type, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);

  std::vector<png_byte> row(static_cast<size_t>(img.width()) * img.channels());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      for (int c = 0; c < img.channels(); ++c) {
        const double v = std::clamp(img.at(y, x, c), 0.0, 1.0);
        row[static_cast<size_t>(x) * img.channels() + c] =
            static_cast<png_byte>(std::lround(v * 255.0));
      }
    }
    png_write_row(png, row.data());
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

void skip_pnm_whitespace(std::istream& is) {
  while (true) {
    const int c = is.peek();
    if (c == '#') {
      std::string line;
      std::getline(is, line);
    } else if (std::isspace(c)) {
      is.get();
    } else {
      break;
    }
  }
}

Image load_pnm(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("load_image: cannot open " + path);
  std::string magic;
  is >> magic;
  if (magic != "P5" && magic != "P6") {
    throw std::runtime_error("load_image: unsupported PNM type in " + path);
  }
  const int channels = magic == "P6" ? 3 : 1;
  int w = 0, h = 0, maxval = 0;
  skip_pnm_whitespace(is);
  is >> w;
  skip_pnm_whitespace(is);
  is >> h;
  skip_pnm_whitespace(is);
  is >> maxval;
  if (!is || w <= 0 || h <= 0 || maxval <= 0 || maxval > 65535) {
    throw std::runtime_error("load_image: bad PNM header in " + path);
  }
  is.get();  // single whitespace byte before the raster

  const int bytes_per = maxval > 255 ? 2 : 1;
  std::vector<unsigned char> raster(static_cast<size_t>(w) * h * channels * bytes_per);
  is.read(reinterpret_cast<char*>(raster.data()), static_cast<std::streamsize>(raster.size()));
  if (!is) throw std::runtime_error("load_image: truncated PNM raster in " + path);

  Image img(h, w, channels);
  size_t idx = 0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < channels; ++c) {
        double v;
        if (bytes_per == 2) {
          v = raster[idx] * 256.0 + raster[idx + 1];  // big-endian per the format
          idx += 2;
        } else {
          v = raster[idx++];
        }
        img.at(y, x, c) = v / maxval;
      }
    }
  }
  return img;
}

void save_pnm(const Image& img, const std::string& path, bool color) {
  if (color && img.channels() != 3) {
    throw std::invalid_argument("save_image: .ppm needs a 3-channel image");
  }
  if (!color && img.channels() != 1) {
    throw std::invalid_argument("save_image: .pgm needs a 1-channel image");
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("save_image: cannot open " + path);
  os << (color ? "P6" : "P5") << "\n" << img.width() << " " << img.height() << "\n255\n";
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      for (int c = 0; c < img.channels(); ++c) {
        const double v = std::clamp(img.at(y, x, c), 0.0, 1.0);
        os.put(static_cast<char>(std::lround(v * 255.0)));
      }
    }
  }
  if (!os) throw std::runtime_error("save_image: write failed: " + path);
}

}  // namespace

Image load_image(const std::string& path) {
  const std::string ext = lower_extension(path);
  if (ext == "ppm" || ext == "pgm" || ext == "pnm") return load_pnm(path);
  return load_png(path);
}

void save_image(const Image& img, const std::string& path) {
  const std::string ext = lower_extension(path);
  if (ext == "ppm") {
    save_pnm(img, path, true);
  } else if (ext == "pgm") {
    save_pnm(img, path, false);
  } else if (ext == "png") {
    save_png(img, path);
  } else {
    throw std::invalid_argument("save_image: unsupported extension ." + ext);
  }
}

Image resize_bilinear(const Image& img, int height, int width) {
  if (height <= 0 || width <= 0) {
    throw std::invalid_argument("resize_bilinear: target dimensions must be positive");
  }
  Image out(height, width, img.channels());
  const double sy = height > 1 ? static_cast<double>(img.height() - 1) / (height - 1) : 0.0;
  const double sx = width > 1 ? static_cast<double>(img.width() - 1) / (width - 1) : 0.0;
  for (int y = 0; y < height; ++y) {
    const double fy = y * sy;
    const int y0 = static_cast<int>(fy);
    const int y1 = std::min(y0 + 1, img.height() - 1);
    const double wy = fy - y0;
    for (int x = 0; x < width; ++x) {
      const double fx = x * sx;
      const int x0 = static_cast<int>(fx);
      const int x1 = std::min(x0 + 1, img.width() - 1);
      const double wx = fx - x0;
      for (int c = 0; c < img.channels(); ++c) {
        const double top = (1.0 - wx) * img.at(y0, x0, c) + wx * img.at(y0, x1, c);
        const double bot = (1.0 - wx) * img.at(y1, x0, c) + wx * img.at(y1, x1, c);
        out.at(y, x, c) = (1.0 - wy) * top + wy * bot;
      }
    }
  }
  return out;
}

}  // namespace sspnp::io
