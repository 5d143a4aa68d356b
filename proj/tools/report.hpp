#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

namespace scene3d::cli {

inline std::string fmt4(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf[0] == '-' && std::string_view(buf + 1).find_first_not_of("0.") ==
                                std::string_view::npos
               ? buf + 1
               : buf;
}

inline std::string fmt6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

inline std::string fmt6e(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6e", v);
    return buf;
}

// Accumulates the machine-readable report: key=value lines plus tab-separated
// table sections. Content is fully determined by the inputs, so identical
// runs produce identical bytes.
class Report {
public:
    explicit Report(std::string task) { line("# scene3d " + task + " report"); }

    void kv(const std::string& key, const std::string& value) { line(key + "=" + value); }
    void kv(const std::string& key, double value) { kv(key, fmt4(value)); }
    void kv(const std::string& key, long value) { kv(key, std::to_string(value)); }
    void kv(const std::string& key, int value) { kv(key, std::to_string(value)); }

    void section(const std::string& name) { line("[" + name + "]"); }
    void row(const std::vector<std::string>& cells) {
        std::string joined;
        for (size_t i = 0; i < cells.size(); ++i) {
            if (i > 0) joined += '\t';
            joined += cells[i];
        }
        line(joined);
    }
    void line(const std::string& text) { body_ += text + "\n"; }

    const std::string& text() const { return body_; }

    bool write(const std::string& path) const {
        std::ofstream out(path, std::ios::binary);
        if (!out) return false;
        out << body_;
        return !out.fail();
    }

private:
    std::string body_;
};

}  // namespace scene3d::cli
