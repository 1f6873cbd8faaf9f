#include "imgcx/image_io.hpp"

#include <cstdio>
#include <csetjmp>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include <jpeglib.h>
#include <png.h>

#include "imgcx/errors.hpp"

namespace imgcx::io {

namespace {

bool is_png(std::span<const std::uint8_t> bytes) {
    return bytes.size() >= 8 && png_sig_cmp(bytes.data(), 0, 8) == 0;
}

bool is_jpeg(std::span<const std::uint8_t> bytes) {
    return bytes.size() >= 3 && bytes[0] == 0xFF && bytes[1] == 0xD8 && bytes[2] == 0xFF;
}

GrayImage decode_png(std::span<const std::uint8_t> bytes) {
    png_image image;
    std::memset(&image, 0, sizeof image);
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
        throw InvalidInput(std::string("PNG decode failed: ") + image.message);
    }
    // 16-bit sources are reduced to 8-bit sRGB samples by libpng.
    const bool color = (image.format & PNG_FORMAT_FLAG_COLOR) != 0;
    png_color white{255, 255, 255};
    const std::size_t w = image.width;
    const std::size_t h = image.height;

    image.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
    const std::size_t channels = color ? 3 : 1;
    std::vector<std::uint8_t> buf(w * h * channels);
    if (!png_image_finish_read(&image, &white, buf.data(), 0, nullptr)) {
        throw InvalidInput(std::string("PNG decode failed: ") + image.message);
    }
    if (!color) return GrayImage::from_bytes(w, h, buf);
    RgbImage rgb{w, h, std::vector<double>(buf.size())};
    for (std::size_t i = 0; i < buf.size(); ++i) rgb.data[i] = buf[i] / 255.0;
    return to_grayscale(rgb);
}

struct JpegError {
    jpeg_error_mgr mgr;
    std::jmp_buf jump;
    char message[JMSG_LENGTH_MAX];
};

void jpeg_error_exit(j_common_ptr cinfo) {
    auto* err = reinterpret_cast<JpegError*>(cinfo->err);
    (*cinfo->err->format_message)(cinfo, err->message);
    std::longjmp(err->jump, 1);
}

GrayImage decode_jpeg(std::span<const std::uint8_t> bytes) {
    jpeg_decompress_struct cinfo{};
    JpegError err{};
    cinfo.err = jpeg_std_error(&err.mgr);
    err.mgr.error_exit = jpeg_error_exit;

    std::vector<std::uint8_t> pixels;
    std::size_t w = 0, h = 0, channels = 0;
    if (setjmp(err.jump)) {
        jpeg_destroy_decompress(&cinfo);
        throw InvalidInput(std::string("JPEG decode failed: ") + err.message);
    }
    jpeg_create_decompress(&cinfo);
    jpeg_mem_src(&cinfo, bytes.data(), static_cast<unsigned long>(bytes.size()));
    jpeg_read_header(&cinfo, TRUE);
    if (cinfo.jpeg_color_space != JCS_GRAYSCALE) cinfo.out_color_space = JCS_RGB;
    jpeg_start_decompress(&cinfo);
    w = cinfo.output_width;
    h = cinfo.output_height;
    channels = static_cast<std::size_t>(cinfo.output_components);
    pixels.resize(w * h * channels);
    while (cinfo.output_scanline < cinfo.output_height) {
        JSAMPROW row = pixels.data() + cinfo.output_scanline * w * channels;
        jpeg_read_scanlines(&cinfo, &row, 1);
    }
    jpeg_finish_decompress(&cinfo);
    jpeg_destroy_decompress(&cinfo);

    if (channels == 1) return GrayImage::from_bytes(w, h, pixels);
    RgbImage rgb{w, h, std::vector<double>(pixels.size())};
    for (std::size_t i = 0; i < pixels.size(); ++i) rgb.data[i] = pixels[i] / 255.0;
    return to_grayscale(rgb);
}

}  // namespace

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    if (in.bad()) throw InvalidInput("read error on " + path.string());
    return bytes;
}

GrayImage decode_image(std::span<const std::uint8_t> encoded) {
    if (is_png(encoded)) return decode_png(encoded);
    if (is_jpeg(encoded)) return decode_jpeg(encoded);
    throw InvalidInput("unsupported image format (expected PNG or JPEG)");
}

GrayImage load_image(const std::filesystem::path& path) {
    const auto bytes = read_file(path);
    try {
        return decode_image(bytes);
    } catch (const InvalidInput& e) {
        throw InvalidInput(path.string() + ": " + e.what());
    }
}

std::vector<std::uint8_t> encode_png(const GrayImage& img) {
    png_image image;
    std::memset(&image, 0, sizeof image);
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(img.width());
    image.height = static_cast<png_uint_32>(img.height());
    image.format = PNG_FORMAT_GRAY;
    const auto bytes = img.to_bytes();

    png_alloc_size_t size = 0;
    if (!png_image_write_to_memory(&image, nullptr, &size, 0, bytes.data(), 0, nullptr)) {
        throw InvalidInput(std::string("PNG encode failed: ") + image.message);
    }
    std::vector<std::uint8_t> out(size);
    if (!png_image_write_to_memory(&image, out.data(), &size, 0, bytes.data(), 0, nullptr)) {
        throw InvalidInput(std::string("PNG encode failed: ") + image.message);
    }
    out.resize(size);
    return out;
}

void write_png(const GrayImage& img, const std::filesystem::path& path) {
    const auto bytes = encode_png(img);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidInput("cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
}

}  // namespace imgcx::io
