#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scene3d/expected.hpp"
#include "scene3d/geometry.hpp"

namespace scene3d::proto {

// Renders x with exactly two fractional digits, rounding half away from
// zero on the decimal value ("1.005" -> "1.01"); "-0.00" normalizes to
// "0.00". Throws std::invalid_argument on non-finite input.
std::string format_number(double x);

struct PromptOptions {
    std::string image_token = "<image>";
    // The canonical detection template spells the last field "rolll".
    // Models trained against it expect that byte sequence; turn this off
    // to emit "roll" instead.
    bool legacy_roll_spelling = true;
};

// Prompt builders for the three tasks. Image placeholders are rendered with
// options.image_token, numbers with format_number.
std::string grounding_prompt(std::string_view query, int num_frames,
                             const PromptOptions& options = {});
std::string captioning_prompt(const Vec3& center, int num_frames,
                              const PromptOptions& options = {});
std::string detection_prompt(int num_frames, const PromptOptions& options = {});

struct GroundingResponse {
    int frame = 0;
    OrientedBox3D box;
};

struct DetectionItem {
    std::string label;
    OrientedBox3D box;
};

struct DetectionResponse {
    std::vector<DetectionItem> items;
    std::vector<std::string> warnings;  // lenient-mode entry drops
};

struct CaptionResponse {
    std::string text;
};

enum class ParseMode { lenient, strict };

// Extracts the first balanced JSON value, preferring the contents of a
// ```...``` fence when one is present. Returns the raw JSON slice.
std::optional<std::string> extract_json_payload(std::string_view text);

// Accepts {"frame": i, "bbox_3d": [9 numbers]} (also "box_3d"), fenced or
// prose-wrapped. Numbers of any decimal precision are accepted.
Expected<GroundingResponse> parse_grounding_response(std::string_view text);

// Accepts a JSON list of {"label": ..., "bbox_3d": [9 numbers]} entries.
// In lenient mode malformed entries are skipped and recorded as warnings;
// in strict mode they fail the parse.
Expected<DetectionResponse> parse_detection_response(std::string_view text,
                                                     ParseMode mode = ParseMode::lenient);

// Caption responses are plain text; whitespace-only responses are errors.
Expected<CaptionResponse> parse_caption_response(std::string_view text);

// "[x, y, z, w, h, d, yaw, pitch, roll]" with two-decimal components.
std::string serialize_box(const OrientedBox3D& box);

}  // namespace scene3d::proto
