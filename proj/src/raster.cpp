#include "wiresynth/render.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace wiresynth {

namespace {

struct Rgb {
  std::uint8_t r, g, b;
};

Rgb color_of(StrokeStyle style) {
  switch (style) {
    case StrokeStyle::AxisX: return {255, 0, 0};
    case StrokeStyle::AxisY: return {0, 255, 0};
    case StrokeStyle::AxisZ: return {0, 0, 255};
    default: return {0, 0, 0};
  }
}

class Canvas {
 public:
  Canvas(int width, int height)
      : width_(width), height_(height), pixels_(static_cast<std::size_t>(width * height * 3), 255) {}

  // Fills pixel centers within half_width of segment pq. With a dash period,
  // only the "on" parts measured from `offset` (arc length at p) are drawn.
  void draw_segment(const Eigen::Vector2d& p, const Eigen::Vector2d& q, double half_width, Rgb color,
                    double offset, double dash, double gap) {
    const Eigen::Vector2d d = q - p;
    const double len2 = d.squaredNorm();
    const double len = std::sqrt(len2);
    const int x0 = std::max(0, static_cast<int>(std::floor(std::min(p.x(), q.x()) - half_width - 1)));
    const int x1 = std::min(width_ - 1, static_cast<int>(std::ceil(std::max(p.x(), q.x()) + half_width + 1)));
    const int y0 = std::max(0, static_cast<int>(std::floor(std::min(p.y(), q.y()) - half_width - 1)));
    const int y1 = std::min(height_ - 1, static_cast<int>(std::ceil(std::max(p.y(), q.y()) + half_width + 1)));
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) {
        const Eigen::Vector2d c(x + 0.5, y + 0.5);
        double t = len2 > 0 ? (c - p).dot(d) / len2 : 0.0;
        t = std::clamp(t, 0.0, 1.0);
        if ((c - (p + t * d)).norm() > half_width) continue;
        if (dash > 0 && std::fmod(offset + t * len, dash + gap) >= dash) continue;
        std::uint8_t* px = &pixels_[static_cast<std::size_t>((y * width_ + x) * 3)];
        px[0] = color.r;
        px[1] = color.g;
        px[2] = color.b;
      }
    }
  }

  std::string encode_png() const {
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw std::runtime_error("png_create_write_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
      png_destroy_write_struct(&png, nullptr);
      throw std::runtime_error("png_create_info_struct failed");
    }
    std::string out;
    if (setjmp(png_jmpbuf(png))) {
      png_destroy_write_struct(&png, &info);
      throw std::runtime_error("png encoding failed");
    }
    png_set_write_fn(
        png, &out,
        [](png_structp p, png_bytep data, png_size_t n) {
          static_cast<std::string*>(png_get_io_ptr(p))->append(reinterpret_cast<const char*>(data), n);
        },
        nullptr);
    png_set_IHDR(png, info, static_cast<png_uint_32>(width_), static_cast<png_uint_32>(height_), 8,
                 PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_set_compression_level(png, 6);
    png_write_info(png, info);
    for (int y = 0; y < height_; ++y) {
      png_write_row(png, const_cast<png_bytep>(&pixels_[static_cast<std::size_t>(y * width_ * 3)]));
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    return out;
  }

 private:
  int width_;
  int height_;
  std::vector<std::uint8_t> pixels_;
};

}  // namespace

std::string rasterize_png(const std::vector<Stroke2>& strokes, const RenderConfig& config) {
  Canvas canvas(config.width, config.height);
  for (const Stroke2& s : strokes) {
    const bool axis = s.style != StrokeStyle::VisibleSolid && s.style != StrokeStyle::HiddenDotted;
    const double half = 0.5 * std::max(axis ? config.axis_stroke_width : config.edge_stroke_width, 1.0);
    const bool dotted = s.style == StrokeStyle::HiddenDotted;
    double offset = 0.0;
    for (std::size_t i = 0; i + 1 < s.points.size(); ++i) {
      canvas.draw_segment(s.points[i], s.points[i + 1], half, color_of(s.style), offset,
                          dotted ? config.dash_length : 0.0, config.dash_gap);
      offset += (s.points[i + 1] - s.points[i]).norm();
    }
  }
  return canvas.encode_png();
}

}  // namespace wiresynth
