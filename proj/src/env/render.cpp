#include "rgvlm/env/render.hpp"

#include <algorithm>
#include <cmath>

namespace rgvlm::env {

namespace {

struct Rgb {
  std::uint8_t r, g, b;
};

constexpr Rgb kBackground = {24, 24, 24};
constexpr Rgb kAgent = {255, 255, 255};
constexpr Rgb kProgressPip = {255, 0, 255};  // magenta is reserved for pips
constexpr Rgb kTable = {170, 120, 70};
constexpr Rgb kBin = {140, 140, 150};
constexpr Rgb kDoor = {70, 190, 190};

Rgb color_rgb(Color c) {
  switch (c) {
    case Color::red: return {220, 60, 60};
    case Color::green: return {70, 200, 90};
    case Color::blue: return {80, 120, 235};
    case Color::yellow: return {235, 205, 70};
  }
  return {255, 255, 255};
}

class Canvas {
 public:
  Canvas(Image& img, int cell_px) : img_(img), s_(cell_px) {}

  void cell_origin(GridPos cell) { ox_ = cell.x * s_; oy_ = cell.y * s_; }

  void dot(int i, int j, Rgb c) {
    if (i < 0 || j < 0 || i >= s_ || j >= s_) return;
    std::uint8_t* p = img_.px(ox_ + i, oy_ + j);
    p[0] = c.r;
    p[1] = c.g;
    p[2] = c.b;
  }

  void fill(int i0, int j0, int i1, int j1, Rgb c) {
    for (int j = j0; j <= j1; ++j)
      for (int i = i0; i <= i1; ++i) dot(i, j, c);
  }

  void frame(int i0, int j0, int i1, int j1, Rgb c) {
    for (int i = i0; i <= i1; ++i) {
      dot(i, j0, c);
      dot(i, j1, c);
    }
    for (int j = j0; j <= j1; ++j) {
      dot(i0, j, c);
      dot(i1, j, c);
    }
  }

  int size() const { return s_; }

 private:
  Image& img_;
  int s_;
  int ox_ = 0, oy_ = 0;
};

void draw_object_glyph(Canvas& c, ObjectKind kind, Rgb col) {
  const int s = c.size();
  switch (kind) {
    case ObjectKind::ball: {
      // filled diamond; stays off the cell's top-left marker strip
      const double mid = (s - 1) / 2.0;
      for (int j = 0; j < s; ++j)
        for (int i = 0; i < s; ++i)
          if (std::abs(i - mid) + std::abs(j - mid) <= s / 2.0) c.dot(i, j, col);
      break;
    }
    case ObjectKind::box:
      c.frame(1, 1, s - 2, s - 2, col);
      break;
    case ObjectKind::key:
      c.fill(s / 2 - 1, 2, s / 2, s - 2, col);      // shaft
      c.fill(s / 2 - 2, 1, s / 2 + 1, 2, col);      // head
      break;
  }
}

void draw_receptacle_glyph(Canvas& c, ReceptacleKind kind) {
  const int s = c.size();
  if (kind == ReceptacleKind::table) {
    c.fill(1, 2, s - 2, 3, kTable);                 // top surface
    c.fill(1, 4, 2, s - 2, kTable);                 // legs
    c.fill(s - 3, 4, s - 2, s - 2, kTable);
  } else {
    c.fill(1, 2, 1, s - 2, kBin);                   // open-topped U
    c.fill(s - 2, 2, s - 2, s - 2, kBin);
    c.fill(1, s - 2, s - 2, s - 2, kBin);
  }
}

}  // namespace

Image render(const BoardSpec& board, const GridState& state, int cell_px) {
  Image img;
  img.width = board.width * cell_px;
  img.height = board.height * cell_px;
  img.rgb.assign(static_cast<std::size_t>(img.width) * img.height * 3, 0);
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x) {
      std::uint8_t* p = img.px(x, y);
      p[0] = kBackground.r;
      p[1] = kBackground.g;
      p[2] = kBackground.b;
    }

  Canvas c(img, cell_px);
  const int s = cell_px;

  for (const auto& r : board.receptacles) {
    c.cell_origin(r.pos);
    draw_receptacle_glyph(c, r.kind);
  }

  for (std::size_t d = 0; d < board.doors.size(); ++d) {
    c.cell_origin(board.doors[d].pos);
    if (state.door_open[d])
      c.frame(1, 0, s - 2, s - 1, kDoor);  // open: just the frame
    else
      c.fill(1, 0, s - 2, s - 1, kDoor);   // closed: solid slab
  }

  for (std::size_t i = 0; i < board.objects.size(); ++i) {
    if (static_cast<int>(i) == state.carried) continue;  // shown via the marker strip
    c.cell_origin(state.object_pos[i]);
    draw_object_glyph(c, board.objects[i].kind, color_rgb(board.objects[i].color));
  }

  c.cell_origin(state.agent);
  c.fill(s / 2 - 1, s / 2 - 1, s / 2, s / 2, kAgent);
  if (state.carried >= 0) {
    // marker strip on the agent cell: carrying flag, object color, kind tag
    const ObjectSpec& o = board.objects[state.carried];
    c.dot(0, 0, kAgent);
    c.dot(1, 0, color_rgb(o.color));
    const std::uint8_t g = static_cast<std::uint8_t>(70 + 60 * static_cast<int>(o.kind));
    c.dot(2, 0, {g, g, g});
  }

  // progress pips: one magenta pixel per completed subtask along the bottom
  const int pips = std::min(state.subtasks_done, img.width / 2);
  for (int k = 0; k < pips; ++k) {
    std::uint8_t* p = img.px(2 * k, img.height - 1);
    p[0] = kProgressPip.r;
    p[1] = kProgressPip.g;
    p[2] = kProgressPip.b;
  }
  return img;
}

}  // namespace rgvlm::env
