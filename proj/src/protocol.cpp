#include "scene3d/protocol.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace scene3d::proto {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Two-decimal rendering
// ---------------------------------------------------------------------------

std::string format_number(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("format_number: non-finite value");

    // Shortest round-trip decimal form, so that a literal like 1.005 rounds
    // on its decimal spelling rather than its binary neighbor.
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    std::string_view repr(buf, static_cast<size_t>(res.ptr - buf));

    bool negative = false;
    if (!repr.empty() && (repr.front() == '-' || repr.front() == '+')) {
        negative = repr.front() == '-';
        repr.remove_prefix(1);
    }

    // Split into digit string and a base-10 exponent: value = digits * 10^exp.
    std::string digits;
    int exp10 = 0;
    size_t i = 0;
    for (; i < repr.size() && repr[i] != '.' && repr[i] != 'e' && repr[i] != 'E'; ++i)
        digits.push_back(repr[i]);
    if (i < repr.size() && repr[i] == '.') {
        for (++i; i < repr.size() && repr[i] != 'e' && repr[i] != 'E'; ++i) {
            digits.push_back(repr[i]);
            --exp10;
        }
    }
    if (i < repr.size()) {  // exponent part
        int e = 0;
        bool eneg = false;
        ++i;
        if (i < repr.size() && (repr[i] == '-' || repr[i] == '+')) {
            eneg = repr[i] == '-';
            ++i;
        }
        for (; i < repr.size(); ++i) e = e * 10 + (repr[i] - '0');
        exp10 += eneg ? -e : e;
    }

    // Scale to hundredths: we want round(value * 100) as a digit string.
    int shift = exp10 + 2;
    if (shift >= 0) {
        digits.append(static_cast<size_t>(shift), '0');
    } else {
        const size_t drop = static_cast<size_t>(-shift);
        const size_t keep = digits.size() > drop ? digits.size() - drop : 0;
        // When more digits are dropped than exist, the fraction starts with
        // zeros and can never reach the rounding threshold.
        const char first_dropped = drop <= digits.size() ? digits[keep] : '0';
        digits.resize(keep);
        if (first_dropped >= '5') {  // half away from zero on the magnitude
            int pos = static_cast<int>(digits.size()) - 1;
            for (; pos >= 0; --pos) {
                if (digits[static_cast<size_t>(pos)] != '9') {
                    ++digits[static_cast<size_t>(pos)];
                    break;
                }
                digits[static_cast<size_t>(pos)] = '0';
            }
            if (pos < 0) digits.insert(digits.begin(), '1');
        }
    }

    // Strip leading zeros, pad to at least three digits, insert the point.
    size_t nz = digits.find_first_not_of('0');
    digits = nz == std::string::npos ? "0" : digits.substr(nz);
    while (digits.size() < 3) digits.insert(digits.begin(), '0');
    std::string out = digits.substr(0, digits.size() - 2) + "." + digits.substr(digits.size() - 2);
    if (negative && out.find_first_not_of("0.") != std::string::npos) out.insert(out.begin(), '-');
    return out;
}

// ---------------------------------------------------------------------------
// Prompt templates
// ---------------------------------------------------------------------------

static std::string image_row(int num_frames, const PromptOptions& options, bool labeled) {
    std::string row;
    for (int i = 0; i < num_frames; ++i) {
        if (labeled) {
            row += "Frame-" + std::to_string(i) + ": ";
        }
        row += options.image_token;
    }
    return row;
}

std::string grounding_prompt(std::string_view query, int num_frames,
                             const PromptOptions& options) {
    if (query.empty()) throw std::invalid_argument("grounding_prompt: empty query");
    std::string p = image_row(num_frames, options, true);
    p += "\nLocalize the first clear frame in the video showing the object described in the "
         "text.\nText: ";
    p += query;
    p += "\nOutput a JSON dictionary with the frame index in \"frame\" and its 3D bounding box "
         "in \"box_3d\" in the frame's coordinates.";
    return p;
}

std::string captioning_prompt(const Vec3& center, int num_frames, const PromptOptions& options) {
    std::string p = image_row(num_frames, options, false);
    p += "\nCarefully watch the video and describe the object located at [";
    p += format_number(center.x) + ", " + format_number(center.y) + ", " + format_number(center.z);
    p += "] in detail.";
    return p;
}

std::string detection_prompt(int num_frames, const PromptOptions& options) {
    std::string p = image_row(num_frames, options, false);
    p += "\nDetect the 3D bounding boxes in the camera coordinate system of the first frame.\n"
         "Output a json list where each entry contains the object name in \"label\" and its 3D "
         "bounding box in \"box_3d\".\nThe 3D bounding box format should be [x_center, y_center, "
         "z_center, x_size, y_size, z_size, yaw, pitch, ";
    p += options.legacy_roll_spelling ? "rolll" : "roll";
    p += "].";
    return p;
}

// ---------------------------------------------------------------------------
// Response parsing
// ---------------------------------------------------------------------------

namespace {

// First balanced {...} or [...] at or after `from`, skipping string literals.
std::optional<std::string> balanced_json(std::string_view text, size_t from) {
    size_t start = std::string_view::npos;
    for (size_t i = from; i < text.size(); ++i) {
        if (text[i] == '{' || text[i] == '[') {
            start = i;
            break;
        }
    }
    if (start == std::string_view::npos) return std::nullopt;

    std::vector<char> stack;
    bool in_string = false, escaped = false;
    for (size_t i = start; i < text.size(); ++i) {
        const char c = text[i];
        if (in_string) {
            if (escaped)
                escaped = false;
            else if (c == '\\')
                escaped = true;
            else if (c == '"')
                in_string = false;
            continue;
        }
        switch (c) {
            case '"': in_string = true; break;
            case '{': stack.push_back('}'); break;
            case '[': stack.push_back(']'); break;
            case '}':
            case ']':
                if (stack.empty() || stack.back() != c) return std::nullopt;
                stack.pop_back();
                if (stack.empty()) return std::string(text.substr(start, i - start + 1));
                break;
            default: break;
        }
    }
    return std::nullopt;
}

}  // namespace

std::optional<std::string> extract_json_payload(std::string_view text) {
    const size_t fence = text.find("```");
    if (fence != std::string_view::npos) {
        size_t body = fence + 3;
        // Skip an optional language tag like "json".
        while (body < text.size() && !std::isspace(static_cast<unsigned char>(text[body])) &&
               text[body] != '{' && text[body] != '[')
            ++body;
        const size_t close = text.find("```", body);
        const auto inner = close == std::string_view::npos ? text.substr(body)
                                                           : text.substr(body, close - body);
        if (auto payload = balanced_json(inner, 0)) return payload;
    }
    return balanced_json(text, 0);
}

namespace {

Expected<OrientedBox3D> box_from_json(const json& arr) {
    if (!arr.is_array()) return Unexpected("box value is not an array");
    if (arr.size() != 9)
        return Unexpected("box has " + std::to_string(arr.size()) + " numbers, expected 9");
    double v[9];
    for (size_t i = 0; i < 9; ++i) {
        if (!arr[i].is_number()) return Unexpected("box element " + std::to_string(i) + " is not a number");
        v[i] = arr[i].get<double>();
        if (!std::isfinite(v[i]))
            return Unexpected("box element " + std::to_string(i) + " is not finite");
    }
    if (v[3] < 0 || v[4] < 0 || v[5] < 0) return Unexpected("box has a negative size component");
    return OrientedBox3D{{v[0], v[1], v[2]}, {v[3], v[4], v[5]}, {v[6], v[7], v[8]}};
}

const json* find_box_key(const json& obj) {
    if (auto it = obj.find("bbox_3d"); it != obj.end()) return &*it;
    if (auto it = obj.find("box_3d"); it != obj.end()) return &*it;
    return nullptr;
}

}  // namespace

Expected<GroundingResponse> parse_grounding_response(std::string_view text) {
    auto payload = extract_json_payload(text);
    if (!payload) return Unexpected("no JSON value found in response");
    json doc = json::parse(*payload, nullptr, /*allow_exceptions=*/false);
    if (doc.is_discarded()) return Unexpected("malformed JSON payload");
    if (!doc.is_object()) return Unexpected("payload is not a JSON object");

    auto frame_it = doc.find("frame");
    if (frame_it == doc.end()) return Unexpected("missing key \"frame\"");
    if (!frame_it->is_number()) return Unexpected("\"frame\" is not a number");
    const double f = frame_it->get<double>();
    if (!std::isfinite(f) || f != std::floor(f)) return Unexpected("\"frame\" is not an integer");
    if (f < 0) return Unexpected("\"frame\" is negative");

    const json* box = find_box_key(doc);
    if (box == nullptr) return Unexpected("missing key \"bbox_3d\"/\"box_3d\"");
    auto parsed = box_from_json(*box);
    if (!parsed) return Unexpected(parsed.error());
    return GroundingResponse{static_cast<int>(f), parsed.value()};
}

Expected<DetectionResponse> parse_detection_response(std::string_view text, ParseMode mode) {
    auto payload = extract_json_payload(text);
    if (!payload) return Unexpected("no JSON value found in response");
    json doc = json::parse(*payload, nullptr, /*allow_exceptions=*/false);
    if (doc.is_discarded()) return Unexpected("malformed JSON payload");
    if (!doc.is_array()) return Unexpected("payload is not a JSON list");

    DetectionResponse out;
    for (size_t i = 0; i < doc.size(); ++i) {
        const json& entry = doc[i];
        std::string problem;
        if (!entry.is_object()) {
            problem = "entry is not an object";
        } else if (auto label = entry.find("label");
                   label == entry.end() || !label->is_string()) {
            problem = "missing or non-string \"label\"";
        } else if (const json* box = find_box_key(entry); box == nullptr) {
            problem = "missing key \"bbox_3d\"/\"box_3d\"";
        } else if (auto parsed = box_from_json(*box); !parsed) {
            problem = parsed.error();
        } else {
            out.items.push_back({label->get<std::string>(), parsed.value()});
            continue;
        }
        if (mode == ParseMode::strict)
            return Unexpected("entry " + std::to_string(i) + ": " + problem);
        out.warnings.push_back("entry " + std::to_string(i) + " skipped: " + problem);
    }
    return out;
}

Expected<CaptionResponse> parse_caption_response(std::string_view text) {
    const size_t begin = text.find_first_not_of(" \t\r\n");
    if (begin == std::string_view::npos) return Unexpected("caption response is empty");
    const size_t end = text.find_last_not_of(" \t\r\n");
    return CaptionResponse{std::string(text.substr(begin, end - begin + 1))};
}

std::string serialize_box(const OrientedBox3D& box) {
    const double v[9] = {box.center.x, box.center.y, box.center.z, box.size.x, box.size.y,
                         box.size.z,   box.angles.x, box.angles.y, box.angles.z};
    std::string out = "[";
    for (int i = 0; i < 9; ++i) {
        if (i > 0) out += ", ";
        out += format_number(v[i]);
    }
    out += "]";
    return out;
}

}  // namespace scene3d::proto
