#include "mandeldecor/image_io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <memory>
#include <stdexcept>

#ifdef MANDELDECOR_HAVE_PNG
#include <png.h>
#endif

namespace mandeldecor {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    return s;
}

std::vector<std::uint8_t> read_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void check_raster(const Raster& r) {
    if (r.width < 1 || r.height < 1 ||
        r.pixels.size() != static_cast<std::size_t>(r.width) * r.height * 3)
        throw std::invalid_argument("raster size does not match its pixel buffer");
}

#ifdef MANDELDECOR_HAVE_PNG
struct FileCloser {
    void operator()(FILE* f) const {
        if (f) std::fclose(f);
    }
};

void write_png(const Raster& raster, const std::string& path) {
    std::unique_ptr<FILE, FileCloser> fp(std::fopen(path.c_str(), "wb"));
    if (!fp) throw std::runtime_error("cannot open '" + path + "' for writing");
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw std::runtime_error("png: cannot create write struct");
    png_infop info = png_create_info_struct(png);
    if (!info || setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, info ? &info : nullptr);
        throw std::runtime_error("png: encoding failed for '" + path + "'");
    }
    png_init_io(png, fp.get());
    png_set_IHDR(png, info, static_cast<png_uint_32>(raster.width),
                 static_cast<png_uint_32>(raster.height), 8, PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    // no timestamps or text chunks, so identical rasters give identical files
    png_write_info(png, info);
    for (int j = 0; j < raster.height; ++j)
        png_write_row(png, const_cast<png_bytep>(raster.at(0, j)));
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

Raster read_png(const std::string& path) {
    std::unique_ptr<FILE, FileCloser> fp(std::fopen(path.c_str(), "rb"));
    if (!fp) throw std::runtime_error("cannot open '" + path + "' for reading");
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw std::runtime_error("png: cannot create read struct");
    png_infop info = png_create_info_struct(png);
    if (!info || setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
        throw std::runtime_error("png: decoding failed for '" + path + "'");
    }
    png_init_io(png, fp.get());
    png_read_info(png, info);
    png_set_strip_16(png);
    png_set_strip_alpha(png);
    png_set_palette_to_rgb(png);
    png_set_gray_to_rgb(png);
    png_read_update_info(png, info);
    Raster r(static_cast<int>(png_get_image_width(png, info)),
             static_cast<int>(png_get_image_height(png, info)));
    for (int j = 0; j < r.height; ++j) png_read_row(png, r.at(0, j), nullptr);
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return r;
}
#endif

}  // namespace

ImageFormat parse_image_format(const std::string& name) {
    const std::string n = lower(name);
    if (n == "ppm" || n == "p6" || n == "ppm-p6") return ImageFormat::ppm;
    if (n == "png") return ImageFormat::png;
    throw std::invalid_argument("unsupported image format '" + name + "'");
}

ImageFormat format_from_path(const std::string& path) {
    const auto dot = path.find_last_of('.');
    if (dot == std::string::npos)
        throw std::invalid_argument("cannot infer image format from '" + path + "'");
    return parse_image_format(path.substr(dot + 1));
}

bool png_supported() {
#ifdef MANDELDECOR_HAVE_PNG
    return true;
#else
    return false;
#endif
}

std::vector<std::uint8_t> encode_ppm(const Raster& raster) {
    check_raster(raster);
    const std::string header =
        "P6\n" + std::to_string(raster.width) + " " + std::to_string(raster.height) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.insert(out.end(), raster.pixels.begin(), raster.pixels.end());
    return out;
}

Raster decode_ppm(const std::vector<std::uint8_t>& bytes) {
    std::size_t pos = 0;
    auto skip_space = [&] {
        while (pos < bytes.size()) {
            if (bytes[pos] == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
            } else if (std::isspace(bytes[pos])) {
                ++pos;
            } else {
                break;
            }
        }
    };
    auto read_int = [&] {
        skip_space();
        long v = 0;
        std::size_t start = pos;
        while (pos < bytes.size() && std::isdigit(bytes[pos])) v = v * 10 + (bytes[pos++] - '0');
        if (pos == start || v > (1L << 24)) throw std::runtime_error("ppm: malformed header");
        return static_cast<int>(v);
    };
    if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '6')
        throw std::runtime_error("ppm: missing P6 magic");
    pos = 2;
    const int w = read_int();
    const int h = read_int();
    const int maxval = read_int();
    if (maxval != 255) throw std::runtime_error("ppm: only maxval 255 is supported");
    if (pos >= bytes.size() || !std::isspace(bytes[pos])) throw std::runtime_error("ppm: malformed header");
    ++pos;
    Raster r(w, h);
    if (bytes.size() - pos != r.pixels.size()) throw std::runtime_error("ppm: pixel data size mismatch");
    std::copy(bytes.begin() + static_cast<std::ptrdiff_t>(pos), bytes.end(), r.pixels.begin());
    return r;
}

void write_image(const Raster& raster, const std::string& path, ImageFormat format) {
    check_raster(raster);
    if (format == ImageFormat::png) {
#ifdef MANDELDECOR_HAVE_PNG
        write_png(raster, path);
        return;
#else
        throw std::runtime_error("PNG output requested for '" + path +
                                 "' but this build has no libpng");
#endif
    }
    const auto bytes = encode_ppm(raster);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

Raster read_image(const std::string& path) {
    const auto bytes = read_bytes(path);
    if (bytes.size() >= 8 && bytes[0] == 0x89 && bytes[1] == 'P' && bytes[2] == 'N') {
#ifdef MANDELDECOR_HAVE_PNG
        return read_png(path);
#else
        throw std::runtime_error("'" + path + "' is PNG but this build has no libpng");
#endif
    }
    try {
        return decode_ppm(bytes);
    } catch (const std::runtime_error& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

}  // namespace mandeldecor
