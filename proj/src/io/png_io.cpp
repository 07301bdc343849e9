// Copyright 2026 The dsamp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dsamp/io/png_io.hpp"

#include <png.h>

#include <csetjmp>
#include <cstring>
#include <fstream>

namespace dsamp::io {

namespace {

struct ByteSink {
  std::vector<uint8_t>* out;
};

void sink_write(png_structp png, png_bytep data, png_size_t len) {
  auto* sink = static_cast<ByteSink*>(png_get_io_ptr(png));
  sink->out->insert(sink->out->end(), data, data + len);
}

void sink_flush(png_structp) {}

struct ByteCursor {
  const uint8_t* data;
  size_t size;
  size_t pos;
};

void cursor_read(png_structp png, png_bytep out, png_size_t len) {
  auto* cur = static_cast<ByteCursor*>(png_get_io_ptr(png));
  if (cur->pos + len > cur->size) png_error(png, "unexpected end of PNG data");
  std::memcpy(out, cur->data + cur->pos, len);
  cur->pos += len;
}

/// RAII wrappers so setjmp-based libpng errors cannot leak structs.
struct WriteCtx {
  png_structp png = nullptr;
  png_infop info = nullptr;

  WriteCtx() {
    png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (png != nullptr) info = png_create_info_struct(png);
    if (png == nullptr || info == nullptr)
      throw FormatError("libpng write init failed");
  }
  ~WriteCtx() { png_destroy_write_struct(&png, &info); }
};

struct ReadCtx {
  png_structp png = nullptr;
  png_infop info = nullptr;

  ReadCtx() {
    png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (png != nullptr) info = png_create_info_struct(png);
    if (png == nullptr || info == nullptr)
      throw FormatError("libpng read init failed");
  }
  ~ReadCtx() { png_destroy_read_struct(&png, &info, nullptr); }
};

void pin_write_settings(png_structp png) {
  png_set_compression_level(png, 6);
  png_set_filter(png, 0, PNG_FILTER_NONE);
}

std::vector<uint8_t> encode_common(int height, int width, int bit_depth,
                                   int color_type,
                                   const std::vector<png_bytep>& rows) {
  if (height < 1 || width < 1) throw FormatError("PNG dimensions must be >= 1");
  std::vector<uint8_t> out;
  ByteSink sink{&out};
  WriteCtx ctx;
  if (setjmp(png_jmpbuf(ctx.png))) throw FormatError("PNG encode failed");
  png_set_write_fn(ctx.png, &sink, sink_write, sink_flush);
  pin_write_settings(ctx.png);
  png_set_IHDR(ctx.png, ctx.info, width, height, bit_depth, color_type,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(ctx.png, ctx.info);
  if (bit_depth == 16) png_set_swap(ctx.png);  // pixels are host little-endian
  png_write_image(ctx.png, const_cast<png_bytepp>(rows.data()));
  png_write_end(ctx.png, ctx.info);
  return out;
}

}  // namespace

std::vector<uint8_t> encode_gray16(const Gray16& img) {
  if (img.pixels.size() != static_cast<size_t>(img.height) * img.width)
    throw FormatError("Gray16 pixel buffer size mismatch");
  std::vector<png_bytep> rows(img.height);
  for (int y = 0; y < img.height; ++y)
    rows[y] = reinterpret_cast<png_bytep>(
        const_cast<uint16_t*>(img.pixels.data() + static_cast<size_t>(y) * img.width));
  return encode_common(img.height, img.width, 16, PNG_COLOR_TYPE_GRAY, rows);
}

Gray16 decode_gray16(const std::vector<uint8_t>& bytes) {
  ByteCursor cur{bytes.data(), bytes.size(), 0};
  ReadCtx ctx;
  if (setjmp(png_jmpbuf(ctx.png))) throw FormatError("PNG decode failed");
  png_set_read_fn(ctx.png, &cur, cursor_read);
  png_read_info(ctx.png, ctx.info);
  if (png_get_bit_depth(ctx.png, ctx.info) != 16 ||
      png_get_color_type(ctx.png, ctx.info) != PNG_COLOR_TYPE_GRAY)
    throw FormatError("expected a single-channel 16-bit PNG");
  Gray16 img;
  img.height = static_cast<int>(png_get_image_height(ctx.png, ctx.info));
  img.width = static_cast<int>(png_get_image_width(ctx.png, ctx.info));
  img.pixels.resize(static_cast<size_t>(img.height) * img.width);
  png_set_swap(ctx.png);
  std::vector<png_bytep> rows(img.height);
  for (int y = 0; y < img.height; ++y)
    rows[y] = reinterpret_cast<png_bytep>(img.pixels.data() +
                                          static_cast<size_t>(y) * img.width);
  png_read_image(ctx.png, rows.data());
  png_read_end(ctx.png, nullptr);
  return img;
}

std::vector<uint8_t> encode_gray8(int height, int width,
                                  const std::vector<uint8_t>& pixels) {
  if (pixels.size() != static_cast<size_t>(height) * width)
    throw FormatError("gray8 pixel buffer size mismatch");
  std::vector<png_bytep> rows(height);
  for (int y = 0; y < height; ++y)
    rows[y] = const_cast<png_bytep>(pixels.data() + static_cast<size_t>(y) * width);
  return encode_common(height, width, 8, PNG_COLOR_TYPE_GRAY, rows);
}

std::vector<uint8_t> decode_gray8(const std::vector<uint8_t>& bytes,
                                  int& height, int& width) {
  ByteCursor cur{bytes.data(), bytes.size(), 0};
  ReadCtx ctx;
  if (setjmp(png_jmpbuf(ctx.png))) throw FormatError("PNG decode failed");
  png_set_read_fn(ctx.png, &cur, cursor_read);
  png_read_info(ctx.png, ctx.info);
  if (png_get_bit_depth(ctx.png, ctx.info) != 8 ||
      png_get_color_type(ctx.png, ctx.info) != PNG_COLOR_TYPE_GRAY)
    throw FormatError("expected a single-channel 8-bit PNG");
  height = static_cast<int>(png_get_image_height(ctx.png, ctx.info));
  width = static_cast<int>(png_get_image_width(ctx.png, ctx.info));
  std::vector<uint8_t> pixels(static_cast<size_t>(height) * width);
  std::vector<png_bytep> rows(height);
  for (int y = 0; y < height; ++y)
    rows[y] = pixels.data() + static_cast<size_t>(y) * width;
  png_read_image(ctx.png, rows.data());
  png_read_end(ctx.png, nullptr);
  return pixels;
}

std::vector<uint8_t> encode_rgb8(const Image& img) {
  if (img.rgb.size() != static_cast<size_t>(img.height) * img.width * 3)
    throw FormatError("rgb8 pixel buffer size mismatch");
  std::vector<png_bytep> rows(img.height);
  for (int y = 0; y < img.height; ++y)
    rows[y] = const_cast<png_bytep>(img.rgb.data() +
                                    static_cast<size_t>(y) * img.width * 3);
  return encode_common(img.height, img.width, 8, PNG_COLOR_TYPE_RGB, rows);
}

Image decode_rgb8(const std::vector<uint8_t>& bytes) {
  ByteCursor cur{bytes.data(), bytes.size(), 0};
  ReadCtx ctx;
  if (setjmp(png_jmpbuf(ctx.png))) throw FormatError("PNG decode failed");
  png_set_read_fn(ctx.png, &cur, cursor_read);
  png_read_info(ctx.png, ctx.info);
  if (png_get_bit_depth(ctx.png, ctx.info) != 8 ||
      png_get_color_type(ctx.png, ctx.info) != PNG_COLOR_TYPE_RGB)
    throw FormatError("expected an 8-bit RGB PNG");
  Image img(static_cast<int>(png_get_image_height(ctx.png, ctx.info)),
            static_cast<int>(png_get_image_width(ctx.png, ctx.info)));
  std::vector<png_bytep> rows(img.height);
  for (int y = 0; y < img.height; ++y)
    rows[y] = img.rgb.data() + static_cast<size_t>(y) * img.width * 3;
  png_read_image(ctx.png, rows.data());
  png_read_end(ctx.png, nullptr);
  return img;
}

void write_bytes(const std::string& path, const std::vector<uint8_t>& bytes) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw DataError("cannot open for writing: " + path);
  os.write(reinterpret_cast<const char*>(bytes.data()),
           static_cast<std::streamsize>(bytes.size()));
  if (!os) throw DataError("write failed: " + path);
}

std::vector<uint8_t> read_bytes(const std::string& path) {
  std::ifstream is(path, std::ios::binary | std::ios::ate);
  if (!is) throw DataError("cannot open: " + path);
  const std::streamsize n = is.tellg();
  is.seekg(0);
  std::vector<uint8_t> bytes(static_cast<size_t>(n));
  is.read(reinterpret_cast<char*>(bytes.data()), n);
  if (!is) throw DataError("read failed: " + path);
  return bytes;
}

}  // namespace dsamp::io
