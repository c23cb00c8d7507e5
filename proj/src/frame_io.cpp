#include "radarpr/frame_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace radarpr {

namespace {

[[noreturn]] void fail(const std::string& msg) {
  throw std::runtime_error(msg);
}

// Skips whitespace and '#' comment lines in a PGM header.
int next_pgm_token(std::istream& in) {
  int c = in.get();
  while (c != EOF) {
    if (c == '#') {
      while (c != EOF && c != '\n') c = in.get();
    } else if (!std::isspace(c)) {
      in.unget();
      return c;
    }
    c = in.get();
  }
  return EOF;
}

long read_pgm_int(std::istream& in, const std::string& path) {
  if (next_pgm_token(in) == EOF) fail("truncated PGM header: " + path);
  long v = 0;
  if (!(in >> v) || v < 0) fail("bad PGM header value: " + path);
  return v;
}

GrayImage read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot open image: " + path.string());
  char magic[2] = {0, 0};
  in.read(magic, 2);
  if (magic[0] != 'P' || magic[1] != '5')
    fail("not a binary PGM (P5): " + path.string());

  GrayImage img;
  img.width = static_cast<int>(read_pgm_int(in, path.string()));
  img.height = static_cast<int>(read_pgm_int(in, path.string()));
  long maxval = read_pgm_int(in, path.string());
  if (img.width <= 0 || img.height <= 0)
    fail("bad PGM dimensions: " + path.string());
  if (maxval <= 0 || maxval > 65535) fail("bad PGM maxval: " + path.string());
  in.get();  // single whitespace after maxval

  const std::size_t n = static_cast<std::size_t>(img.width) * img.height;
  img.pixels.resize(n);
  if (maxval < 256) {
    img.bit_depth = 8;
    std::vector<unsigned char> raw(n);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<long>(n));
    if (!in) fail("truncated PGM data: " + path.string());
    std::copy(raw.begin(), raw.end(), img.pixels.begin());
  } else {
    img.bit_depth = 16;
    std::vector<unsigned char> raw(n * 2);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<long>(n * 2));
    if (!in) fail("truncated PGM data: " + path.string());
    for (std::size_t i = 0; i < n; ++i) {
      // big-endian per the netpbm format
      img.pixels[i] = static_cast<std::uint16_t>((raw[2 * i] << 8) | raw[2 * i + 1]);
    }
  }
  return img;
}

void write_pgm(const std::filesystem::path& path, const GrayImage& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail("cannot write image: " + path.string());
  const int maxval = img.bit_depth == 16 ? 65535 : 255;
  out << "P5\n" << img.width << " " << img.height << "\n" << maxval << "\n";
  const std::size_t n = static_cast<std::size_t>(img.width) * img.height;
  if (img.bit_depth == 16) {
    std::vector<unsigned char> raw(n * 2);
    for (std::size_t i = 0; i < n; ++i) {
      raw[2 * i] = static_cast<unsigned char>(img.pixels[i] >> 8);
      raw[2 * i + 1] = static_cast<unsigned char>(img.pixels[i] & 0xff);
    }
    out.write(reinterpret_cast<const char*>(raw.data()),
              static_cast<long>(raw.size()));
  } else {
    std::vector<unsigned char> raw(n);
    for (std::size_t i = 0; i < n; ++i)
      raw[i] = static_cast<unsigned char>(img.pixels[i] & 0xff);
    out.write(reinterpret_cast<const char*>(raw.data()),
              static_cast<long>(raw.size()));
  }
  if (!out) fail("short write: " + path.string());
}

struct PngReadCtx {
  png_structp png = nullptr;
  png_infop info = nullptr;
  FILE* fp = nullptr;
  ~PngReadCtx() {
    if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
    if (fp) std::fclose(fp);
  }
};

GrayImage read_png(const std::filesystem::path& path) {
  PngReadCtx ctx;
  ctx.fp = std::fopen(path.string().c_str(), "rb");
  if (!ctx.fp) fail("cannot open image: " + path.string());
  ctx.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr,
                                   nullptr);
  if (!ctx.png) fail("png_create_read_struct failed");
  ctx.info = png_create_info_struct(ctx.png);
  if (!ctx.info) fail("png_create_info_struct failed");
  if (setjmp(png_jmpbuf(ctx.png))) fail("corrupt PNG: " + path.string());

  png_init_io(ctx.png, ctx.fp);
  png_read_info(ctx.png, ctx.info);

  const int color_type = png_get_color_type(ctx.png, ctx.info);
  if (color_type != PNG_COLOR_TYPE_GRAY)
    fail("multi-channel image not supported: " + path.string());

  GrayImage img;
  img.width = static_cast<int>(png_get_image_width(ctx.png, ctx.info));
  img.height = static_cast<int>(png_get_image_height(ctx.png, ctx.info));
  int depth = png_get_bit_depth(ctx.png, ctx.info);
  if (depth < 8) {
    png_set_expand_gray_1_2_4_to_8(ctx.png);
    depth = 8;
  }
  img.bit_depth = depth;
  png_read_update_info(ctx.png, ctx.info);

  const std::size_t n = static_cast<std::size_t>(img.width) * img.height;
  img.pixels.resize(n);
  const std::size_t row_bytes = png_get_rowbytes(ctx.png, ctx.info);
  std::vector<unsigned char> row(row_bytes);
  for (int y = 0; y < img.height; ++y) {
    png_read_row(ctx.png, row.data(), nullptr);
    if (depth == 16) {
      for (int x = 0; x < img.width; ++x) {
        img.pixels[static_cast<std::size_t>(y) * img.width + x] =
            static_cast<std::uint16_t>((row[2 * x] << 8) | row[2 * x + 1]);
      }
    } else {
      for (int x = 0; x < img.width; ++x)
        img.pixels[static_cast<std::size_t>(y) * img.width + x] = row[x];
    }
  }
  png_read_end(ctx.png, nullptr);
  return img;
}

struct PngWriteCtx {
  png_structp png = nullptr;
  png_infop info = nullptr;
  FILE* fp = nullptr;
  ~PngWriteCtx() {
    if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
    if (fp) std::fclose(fp);
  }
};

void write_png(const std::filesystem::path& path, const GrayImage& img) {
  PngWriteCtx ctx;
  ctx.fp = std::fopen(path.string().c_str(), "wb");
  if (!ctx.fp) fail("cannot write image: " + path.string());
  ctx.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr,
                                    nullptr);
  if (!ctx.png) fail("png_create_write_struct failed");
  ctx.info = png_create_info_struct(ctx.png);
  if (!ctx.info) fail("png_create_info_struct failed");
  if (setjmp(png_jmpbuf(ctx.png))) fail("PNG write failed: " + path.string());

  png_init_io(ctx.png, ctx.fp);
  png_set_IHDR(ctx.png, ctx.info, img.width, img.height, img.bit_depth,
               PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(ctx.png, ctx.info);

  std::vector<unsigned char> row(static_cast<std::size_t>(img.width) *
                                 (img.bit_depth == 16 ? 2 : 1));
  for (int y = 0; y < img.height; ++y) {
    if (img.bit_depth == 16) {
      for (int x = 0; x < img.width; ++x) {
        const std::uint16_t v =
            img.pixels[static_cast<std::size_t>(y) * img.width + x];
        row[2 * x] = static_cast<unsigned char>(v >> 8);
        row[2 * x + 1] = static_cast<unsigned char>(v & 0xff);
      }
    } else {
      for (int x = 0; x < img.width; ++x)
        row[x] = static_cast<unsigned char>(
            img.pixels[static_cast<std::size_t>(y) * img.width + x] & 0xff);
    }
    png_write_row(ctx.png, row.data());
  }
  png_write_end(ctx.png, nullptr);
}

bool has_extension(const std::filesystem::path& p, const char* ext) {
  std::string e = p.extension().string();
  std::transform(e.begin(), e.end(), e.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return e == ext;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  cells.push_back(cur);
  return cells;
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  std::size_t e = s.find_last_not_of(" \t");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

}  // namespace

GrayImage read_gray_image(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path))
    fail("image file does not exist: " + path.string());
  if (has_extension(path, ".png")) return read_png(path);
  return read_pgm(path);
}

void write_gray_image(const std::filesystem::path& path, const GrayImage& img) {
  if (has_extension(path, ".png"))
    write_png(path, img);
  else
    write_pgm(path, img);
}

RadarFrame load_frame(const std::filesystem::path& path, const FrameMeta& meta,
                      int expected_width, int expected_height) {
  GrayImage img = read_gray_image(path);
  if ((expected_width > 0 && img.width != expected_width) ||
      (expected_height > 0 && img.height != expected_height)) {
    fail("image dimensions do not match metadata for " + path.string());
  }
  RadarFrame frame;
  frame.frame_id = meta.frame_id;
  frame.timestamp = meta.timestamp;
  frame.width = img.width;
  frame.height = img.height;
  frame.resolution = meta.resolution;
  frame.bit_depth = img.bit_depth;
  frame.intensities = std::move(img.pixels);
  frame.pose = meta.pose;
  return frame;
}

void save_frame(const std::filesystem::path& path, const RadarFrame& frame) {
  GrayImage img;
  img.width = frame.width;
  img.height = frame.height;
  img.bit_depth = frame.bit_depth;
  img.pixels = frame.intensities;
  write_gray_image(path, img);
}

BinaryImage binarize(const RadarFrame& frame, std::uint16_t threshold) {
  BinaryImage out = make_binary_image(frame.width, frame.height);
  for (std::size_t i = 0; i < frame.intensities.size(); ++i)
    out.mask[i] = frame.intensities[i] > threshold ? 1 : 0;
  return out;
}

std::vector<FrameMeta> read_metadata_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open metadata CSV: " + path.string());
  std::string line;
  if (!std::getline(in, line)) fail("empty metadata CSV: " + path.string());

  const std::vector<std::string> header = split_csv_line(line);
  int col_id = -1, col_ts = -1, col_x = -1, col_y = -1, col_res = -1;
  for (std::size_t i = 0; i < header.size(); ++i) {
    const std::string h = trim(header[i]);
    if (h == "frame_id") col_id = static_cast<int>(i);
    else if (h == "timestamp") col_ts = static_cast<int>(i);
    else if (h == "x") col_x = static_cast<int>(i);
    else if (h == "y") col_y = static_cast<int>(i);
    else if (h == "resolution") col_res = static_cast<int>(i);
  }
  if (col_id < 0 || col_ts < 0 || col_res < 0)
    fail("metadata CSV missing required columns: " + path.string());

  std::vector<FrameMeta> frames;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const std::vector<std::string> cells = split_csv_line(line);
    auto cell = [&](int col) -> std::string {
      return (col >= 0 && col < static_cast<int>(cells.size()))
                 ? trim(cells[col])
                 : "";
    };
    FrameMeta m;
    m.frame_id = std::stoll(cell(col_id));
    m.timestamp = std::stod(cell(col_ts));
    m.resolution = std::stod(cell(col_res));
    const std::string xs = cell(col_x), ys = cell(col_y);
    if (!xs.empty() && !ys.empty()) m.pose = Pose{std::stod(xs), std::stod(ys)};
    frames.push_back(m);
  }
  return frames;
}

void write_metadata_csv(const std::filesystem::path& path,
                        const std::vector<FrameMeta>& frames) {
  std::ofstream out(path);
  if (!out) fail("cannot write metadata CSV: " + path.string());
  out << "frame_id,timestamp,x,y,resolution\n";
  char buf[160];
  for (const FrameMeta& m : frames) {
    std::string x, y;
    if (m.pose) {
      std::snprintf(buf, sizeof(buf), "%.10g", m.pose->x);
      x = buf;
      std::snprintf(buf, sizeof(buf), "%.10g", m.pose->y);
      y = buf;
    }
    std::snprintf(buf, sizeof(buf), "%lld,%.10g,%s,%s,%.10g",
                  static_cast<long long>(m.frame_id), m.timestamp, x.c_str(),
                  y.c_str(), m.resolution);
    out << buf << "\n";
  }
}

Session load_session(const std::filesystem::path& dir) {
  Session s;
  s.dir = dir;
  s.session_id = dir.filename().string();
  if (s.session_id.empty())  // trailing slash
    s.session_id = dir.parent_path().filename().string();
  s.frames = read_metadata_csv(dir / "metadata.csv");
  return s;
}

std::string frame_image_name(std::int64_t frame_id) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%06lld.pgm",
                static_cast<long long>(frame_id));
  return buf;
}

std::filesystem::path frame_image_path(const std::filesystem::path& dir,
                                       std::int64_t frame_id) {
  char stem[32];
  std::snprintf(stem, sizeof(stem), "%06lld", static_cast<long long>(frame_id));
  const std::string plain = std::to_string(frame_id);
  for (const std::string& base : {std::string(stem), plain}) {
    for (const char* ext : {".pgm", ".png"}) {
      std::filesystem::path p = dir / (base + ext);
      if (std::filesystem::exists(p)) return p;
    }
  }
  fail("no image file for frame " + plain + " in " + dir.string());
}

RadarFrame load_session_frame(const Session& session, std::size_t index) {
  const FrameMeta& meta = session.frames.at(index);
  return load_frame(frame_image_path(session.dir, meta.frame_id), meta);
}

}  // namespace radarpr
