#pragma once

#include <cctype>
#include <csetjmp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <system_error>
#include <vector>

#include <jpeglib.h>
#include <png.h>

#include "error.hpp"
#include "imaging.hpp"

namespace padbench {

enum class ImageFormat { Png, Jpeg };

namespace detail {

inline ImageFormat format_from_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (ext == ".png") return ImageFormat::Png;
  if (ext == ".jpg" || ext == ".jpeg") return ImageFormat::Jpeg;
  throw Error(ErrorCode::UnsupportedFormat, "unknown image extension: " + path.string());
}

struct FileCloser {
  void operator()(std::FILE* f) const noexcept {
    if (f != nullptr) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

inline ImageBuffer decode_png(const std::filesystem::path& path) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (png_image_begin_read_from_file(&image, path.c_str()) == 0) {
    const std::string msg = image.message;
    png_image_free(&image);
    throw Error(ErrorCode::CorruptImage, path.string() + ": " + msg);
  }
  const bool color = (image.format & PNG_FORMAT_FLAG_COLOR) != 0;
  image.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  std::vector<std::uint8_t> pixels(PNG_IMAGE_SIZE(image));
  if (png_image_finish_read(&image, nullptr, pixels.data(), 0, nullptr) == 0) {
    const std::string msg = image.message;
    png_image_free(&image);
    throw Error(ErrorCode::CorruptImage, path.string() + ": " + msg);
  }
  return ImageBuffer(image.width, image.height, color ? 3 : 1, std::move(pixels));
}

inline void encode_png(const ImageBuffer& img, const std::filesystem::path& path) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = img.width();
  image.height = img.height();
  image.format = img.channels() == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  if (png_image_write_to_file(&image, path.c_str(), 0, img.data().data(), 0, nullptr) == 0) {
    const std::string msg = image.message;
    png_image_free(&image);
    throw Error(ErrorCode::IoError, path.string() + ": " + msg);
  }
}

struct JpegErrorManager {
  jpeg_error_mgr base;
  std::jmp_buf jump;
  char message[JMSG_LENGTH_MAX];
};

inline void jpeg_error_exit(j_common_ptr cinfo) {
  auto* err = reinterpret_cast<JpegErrorManager*>(cinfo->err);
  (*cinfo->err->format_message)(cinfo, err->message);
  std::longjmp(err->jump, 1);
}

// libjpeg reports errors through longjmp, so nothing with a destructor may be
// live across the setjmp in these two functions.
inline bool decode_jpeg_raw(std::FILE* file, std::vector<std::uint8_t>& pixels, std::uint32_t& width,
                            std::uint32_t& height, std::string& message) {
  jpeg_decompress_struct cinfo{};
  JpegErrorManager err{};
  cinfo.err = jpeg_std_error(&err.base);
  err.base.error_exit = jpeg_error_exit;
  if (setjmp(err.jump)) {
    message = err.message;
    jpeg_destroy_decompress(&cinfo);
    return false;
  }
  jpeg_create_decompress(&cinfo);
  jpeg_stdio_src(&cinfo, file);
  jpeg_read_header(&cinfo, TRUE);
  cinfo.out_color_space = JCS_RGB;
  jpeg_start_decompress(&cinfo);
  width = cinfo.output_width;
  height = cinfo.output_height;
  pixels.resize(static_cast<std::size_t>(width) * height * 3);
  while (cinfo.output_scanline < cinfo.output_height) {
    JSAMPROW row = pixels.data() + static_cast<std::size_t>(cinfo.output_scanline) * width * 3;
    jpeg_read_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  return true;
}

inline bool encode_jpeg_raw(std::FILE* file, const ImageBuffer& img, int quality, std::string& message) {
  jpeg_compress_struct cinfo{};
  JpegErrorManager err{};
  cinfo.err = jpeg_std_error(&err.base);
  err.base.error_exit = jpeg_error_exit;
  if (setjmp(err.jump)) {
    message = err.message;
    jpeg_destroy_compress(&cinfo);
    return false;
  }
  jpeg_create_compress(&cinfo);
  jpeg_stdio_dest(&cinfo, file);
  cinfo.image_width = img.width();
  cinfo.image_height = img.height();
  cinfo.input_components = static_cast<int>(img.channels());
  cinfo.in_color_space = img.channels() == 3 ? JCS_RGB : JCS_GRAYSCALE;
  jpeg_set_defaults(&cinfo);
  jpeg_set_quality(&cinfo, quality, TRUE);
  jpeg_start_compress(&cinfo, TRUE);
  while (cinfo.next_scanline < cinfo.image_height) {
    auto* row = const_cast<JSAMPLE*>(img.data().data() + static_cast<std::size_t>(cinfo.next_scanline) *
                                                             img.row_stride());
    jpeg_write_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_compress(&cinfo);
  jpeg_destroy_compress(&cinfo);
  return true;
}

}  // namespace detail

/// Decodes a PNG or JPEG, sniffing the format from the file signature.
/// JPEGs always decode to RGB; PNGs keep gray vs color (alpha is dropped).
inline ImageBuffer load_image(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw Error(ErrorCode::FileNotFound, path.string());
  }
  unsigned char sig[8] = {};
  {
    std::ifstream in(path, std::ios::binary);
    in.read(reinterpret_cast<char*>(sig), sizeof sig);
    if (in.gcount() < 3) throw Error(ErrorCode::UnsupportedFormat, path.string() + ": file too short");
  }
  if (png_sig_cmp(sig, 0, 8) == 0) return detail::decode_png(path);
  if (sig[0] == 0xFF && sig[1] == 0xD8 && sig[2] == 0xFF) {
    detail::FilePtr file(std::fopen(path.c_str(), "rb"));
    if (!file) throw Error(ErrorCode::FileNotFound, path.string());
    std::vector<std::uint8_t> pixels;
    std::uint32_t w = 0, h = 0;
    std::string message;
    if (!detail::decode_jpeg_raw(file.get(), pixels, w, h, message)) {
      throw Error(ErrorCode::CorruptImage, path.string() + ": " + message);
    }
    return ImageBuffer(w, h, 3, std::move(pixels));
  }
  throw Error(ErrorCode::UnsupportedFormat, path.string() + ": not a PNG or JPEG file");
}

inline void save_image(const ImageBuffer& img, const std::filesystem::path& path, ImageFormat format,
                       int jpeg_quality = 95) {
  if (format == ImageFormat::Png) {
    detail::encode_png(img, path);
    return;
  }
  detail::FilePtr file(std::fopen(path.c_str(), "wb"));
  if (!file) throw Error(ErrorCode::IoError, "cannot open for writing: " + path.string());
  std::string message;
  if (!detail::encode_jpeg_raw(file.get(), img, jpeg_quality, message)) {
    throw Error(ErrorCode::IoError, path.string() + ": " + message);
  }
}

/// Format chosen from the extension (.png, .jpg, .jpeg).
inline void save_image(const ImageBuffer& img, const std::filesystem::path& path) {
  save_image(img, path, detail::format_from_extension(path));
}

/// Writes to a sibling temporary file, then renames over `path`, creating
/// parent directories as needed.
inline void save_image_atomic(const ImageBuffer& img, const std::filesystem::path& path) {
  const ImageFormat format = detail::format_from_extension(path);
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  auto tmp = path;
  tmp += ".tmp";
  save_image(img, tmp, format);
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorCode::IoError, "rename failed: " + path.string());
  }
}

}  // namespace padbench
