#include "srise/image_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <vector>

#include <jpeglib.h>
#include <png.h>

namespace srise {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

Image from_bytes(const std::vector<unsigned char>& bytes, int h, int w, int c) {
    Image img(h, w, c);
    const std::size_t n = img.data.size();
    for (std::size_t i = 0; i < n; ++i) {
        img.data[i] = bytes[i] / 255.0;
    }
    return img;
}

Image decode_png(std::FILE* f, const std::string& path) {
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw DecodeError("libpng init failed for " + path);
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw DecodeError("libpng init failed for " + path);
    }
    std::vector<unsigned char> bytes;
    std::vector<png_bytep> rows;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw DecodeError("not a decodable PNG: " + path);
    }
    png_init_io(png, f);
    png_read_info(png, info);

    const png_uint_32 w = png_get_image_width(png, info);
    const png_uint_32 h = png_get_image_height(png, info);
    const int color = png_get_color_type(png, info);
    const int depth = png_get_bit_depth(png, info);

    if (depth == 16) png_set_strip_16(png);
    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    if (color & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_strip_alpha(png);
    png_set_interlace_handling(png);
    png_read_update_info(png, info);

    const int channels = png_get_channels(png, info);
    if (channels != 1 && channels != 3) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw DecodeError("unsupported channel count " + std::to_string(channels) + " in " + path);
    }
    bytes.resize(static_cast<std::size_t>(w) * h * channels);
    rows.resize(h);
    for (png_uint_32 y = 0; y < h; ++y) {
        rows[y] = bytes.data() + static_cast<std::size_t>(y) * w * channels;
    }
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return from_bytes(bytes, static_cast<int>(h), static_cast<int>(w), channels);
}

struct JpegErrorMgr {
    jpeg_error_mgr pub;
    std::jmp_buf jump;
};

void jpeg_error_exit(j_common_ptr cinfo) {
    auto* mgr = reinterpret_cast<JpegErrorMgr*>(cinfo->err);
    std::longjmp(mgr->jump, 1);
}

Image decode_jpeg(std::FILE* f, const std::string& path) {
    jpeg_decompress_struct cinfo;
    JpegErrorMgr err;
    cinfo.err = jpeg_std_error(&err.pub);
    err.pub.error_exit = jpeg_error_exit;
    if (setjmp(err.jump)) {
        jpeg_destroy_decompress(&cinfo);
        throw DecodeError("not a decodable JPEG: " + path);
    }
    jpeg_create_decompress(&cinfo);
    jpeg_stdio_src(&cinfo, f);
    jpeg_read_header(&cinfo, TRUE);
    cinfo.out_color_space = cinfo.num_components == 1 ? JCS_GRAYSCALE : JCS_RGB;
    jpeg_start_decompress(&cinfo);

    const int w = static_cast<int>(cinfo.output_width);
    const int h = static_cast<int>(cinfo.output_height);
    const int channels = cinfo.output_components;
    if (channels != 1 && channels != 3) {
        jpeg_destroy_decompress(&cinfo);
        throw DecodeError("unsupported channel count " + std::to_string(channels) + " in " + path);
    }
    std::vector<unsigned char> bytes(static_cast<std::size_t>(w) * h * channels);
    while (cinfo.output_scanline < cinfo.output_height) {
        unsigned char* row = bytes.data() + static_cast<std::size_t>(cinfo.output_scanline) * w * channels;
        jpeg_read_scanlines(&cinfo, &row, 1);
    }
    jpeg_finish_decompress(&cinfo);
    jpeg_destroy_decompress(&cinfo);
    return from_bytes(bytes, h, w, channels);
}

} // namespace

Image load_image(const std::string& path) {
    FilePtr f(std::fopen(path.c_str(), "rb"));
    if (!f) throw InputError("cannot open image file: " + path);

    unsigned char magic[8] = {};
    const std::size_t got = std::fread(magic, 1, sizeof(magic), f.get());
    std::rewind(f.get());
    if (got >= 8 && png_sig_cmp(magic, 0, 8) == 0) {
        return decode_png(f.get(), path);
    }
    if (got >= 2 && magic[0] == 0xFF && magic[1] == 0xD8) {
        return decode_jpeg(f.get(), path);
    }
    throw DecodeError("unrecognized image format (expected PNG or JPEG): " + path);
}

Image load_image(const std::string& path, int target_height, int target_width) {
    if (target_height <= 0 || target_width <= 0) {
        throw ConfigError("image target size must be positive for " + path);
    }
    return resize_bilinear(load_image(path), target_height, target_width);
}

void save_png(const Image& img, const std::string& path) {
    FilePtr f(std::fopen(path.c_str(), "wb"));
    if (!f) throw InputError("cannot open for writing: " + path);

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw Error("libpng init failed for " + path);
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw Error("libpng init failed for " + path);
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw Error("PNG write failed: " + path);
    }
    png_init_io(png, f.get());
    const int color = img.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB;
    png_set_IHDR(png, info, img.width, img.height, 8, color,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);

    std::vector<unsigned char> row(static_cast<std::size_t>(img.width) * img.channels);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            for (int c = 0; c < img.channels; ++c) {
                const double v = std::clamp(img.at(y, x, c), 0.0, 1.0);
                row[static_cast<std::size_t>(x) * img.channels + c] =
                    static_cast<unsigned char>(std::lround(v * 255.0));
            }
        }
        png_write_row(png, row.data());
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

namespace {

void append_double(std::string& out, double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, res.ptr);
}

void put_u32le(std::string& out, std::uint32_t v) {
    out.push_back(static_cast<char>(v & 0xFF));
    out.push_back(static_cast<char>((v >> 8) & 0xFF));
    out.push_back(static_cast<char>((v >> 16) & 0xFF));
    out.push_back(static_cast<char>((v >> 24) & 0xFF));
}

} // namespace

void save_map_csv(const SaliencyMap& map, const std::string& path) {
    std::string out;
    out.reserve(map.size() * 12);
    for (int y = 0; y < map.height; ++y) {
        for (int x = 0; x < map.width; ++x) {
            if (x) out.push_back(',');
            append_double(out, map.at(y, x));
        }
        out.push_back('\n');
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InputError("cannot open for writing: " + path);
    f.write(out.data(), static_cast<std::streamsize>(out.size()));
}

void save_map_binary(const SaliencyMap& map, const std::string& path) {
    std::string out;
    out.reserve(8 + map.size() * 4);
    put_u32le(out, static_cast<std::uint32_t>(map.height));
    put_u32le(out, static_cast<std::uint32_t>(map.width));
    for (const double v : map.values) {
        const float fv = static_cast<float>(v);
        std::uint32_t bits;
        std::memcpy(&bits, &fv, 4);
        put_u32le(out, bits);
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InputError("cannot open for writing: " + path);
    f.write(out.data(), static_cast<std::streamsize>(out.size()));
}

SaliencyMap load_map_binary(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw InputError("cannot open: " + path);
    std::string bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    if (bytes.size() < 8) throw DecodeError("truncated saliency binary: " + path);
    const auto u32 = [&](std::size_t off) {
        return static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[off])) |
               (static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[off + 1])) << 8) |
               (static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[off + 2])) << 16) |
               (static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[off + 3])) << 24);
    };
    const std::uint32_t h = u32(0), w = u32(4);
    const std::size_t expect = 8 + static_cast<std::size_t>(h) * w * 4;
    if (bytes.size() != expect) throw DecodeError("saliency binary size mismatch: " + path);
    SaliencyMap map(static_cast<int>(h), static_cast<int>(w));
    for (std::size_t i = 0; i < map.size(); ++i) {
        const std::uint32_t bits = u32(8 + i * 4);
        float fv;
        std::memcpy(&fv, &bits, 4);
        map.values[i] = fv;
    }
    return map;
}

} // namespace srise
