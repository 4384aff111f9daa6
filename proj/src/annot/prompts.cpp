#include "rgvlm/annot/prompts.hpp"

#include "rgvlm/common/errors.hpp"
#include "rgvlm/common/png.hpp"

namespace rgvlm::annot {

namespace {

// 3x5 digit glyphs, one bit per pixel, row-major from the top.
constexpr std::uint16_t kDigits[10] = {
    0b111101101101111,  // 0
    0b010110010010111,  // 1
    0b111001111100111,  // 2
    0b111001111001111,  // 3
    0b101101111001001,  // 4
    0b111100111001111,  // 5
    0b111100111101111,  // 6
    0b111001001001001,  // 7
    0b111101111101111,  // 8
    0b111101111001111,  // 9
};

void stamp_number(env::Image& img, int ox, int oy, int number) {
  std::string digits = std::to_string(number);
  int x = ox;
  for (char ch : digits) {
    const std::uint16_t glyph = kDigits[ch - '0'];
    // dark backing box so the stamp stays readable on any tile
    for (int j = -1; j <= 5; ++j)
      for (int i = -1; i <= 3; ++i) {
        const int px = x + i, py = oy + j;
        if (px < 0 || py < 0 || px >= img.width || py >= img.height) continue;
        std::uint8_t* p = img.px(px, py);
        p[0] = p[1] = p[2] = 0;
      }
    for (int j = 0; j < 5; ++j)
      for (int i = 0; i < 3; ++i) {
        if (!(glyph >> (14 - (j * 3 + i)) & 1)) continue;
        const int px = x + i, py = oy + j;
        if (px >= img.width || py >= img.height) continue;
        std::uint8_t* p = img.px(px, py);
        p[0] = p[1] = p[2] = 255;
      }
    x += 4;
  }
}

}  // namespace

std::string fill_template(std::string tpl,
                          const std::vector<std::pair<std::string, std::string>>& subs) {
  for (const auto& [key, value] : subs) {
    const std::string needle = "{" + key + "}";
    std::size_t pos = 0;
    while ((pos = tpl.find(needle, pos)) != std::string::npos) {
      tpl.replace(pos, needle.size(), value);
      pos += value.size();
    }
  }
  return tpl;
}

env::Image compose_grid(const std::vector<env::Image>& frames, int columns) {
  if (frames.empty()) throw ValidationError("compose_grid: no frames");
  if (columns < 1) throw ValidationError("compose_grid: columns must be positive");
  const int fw = frames.front().width;
  const int fh = frames.front().height;
  for (const auto& f : frames)
    if (f.width != fw || f.height != fh)
      throw ValidationError("compose_grid: frames have mixed sizes");

  const int n = static_cast<int>(frames.size());
  const int cols = std::min(columns, n);
  const int rows = (n + columns - 1) / columns;
  const int gutter = 2;

  env::Image out;
  out.width = cols * fw + (cols - 1) * gutter;
  out.height = rows * fh + (rows - 1) * gutter;
  out.rgb.assign(static_cast<std::size_t>(out.width) * out.height * 3, 0);

  for (int k = 0; k < n; ++k) {
    const int ox = (k % columns) * (fw + gutter);
    const int oy = (k / columns) * (fh + gutter);
    for (int y = 0; y < fh; ++y)
      for (int x = 0; x < fw; ++x) {
        const std::uint8_t* src = frames[k].px(x, y);
        std::uint8_t* dst = out.px(ox + x, oy + y);
        dst[0] = src[0];
        dst[1] = src[1];
        dst[2] = src[2];
      }
    stamp_number(out, ox + 1, oy + 1, k + 1);
  }
  return out;
}

ChatRequest stage1_request(const PromptTemplates& templates, const std::string& instruction,
                           const env::Image& grid, const Window& window, int scale_max) {
  ChatMessage msg;
  msg.role = "user";
  msg.text = fill_template(templates.stage1,
                           {{"instruction", instruction},
                            {"num_frames", std::to_string(window.count + 1)},
                            {"num_actions", std::to_string(window.count)},
                            {"scale_max", std::to_string(scale_max)}});
  msg.images.push_back(encode_png(grid.width, grid.height, grid.rgb.data()));
  return ChatRequest{{std::move(msg)}};
}

ChatRequest stage2_request(const ChatRequest& stage1, const std::string& stage1_response,
                           const PromptTemplates& templates, const Window& window,
                           int scale_max) {
  ChatRequest out = stage1;
  out.messages.push_back({"assistant", stage1_response, {}});
  ChatMessage msg;
  msg.role = "user";
  msg.text = fill_template(templates.stage2,
                           {{"num_frames", std::to_string(window.count + 1)},
                            {"num_actions", std::to_string(window.count)},
                            {"scale_max", std::to_string(scale_max)}});
  out.messages.push_back(std::move(msg));
  return out;
}

}  // namespace rgvlm::annot
