#pragma once

#include <string>
#include <vector>

namespace sllm {

/// Collects non-fatal warnings raised while loading or evaluating data.
/// Functions accept a nullable pointer; a null sink drops warnings.
class Diagnostics {
public:
    void warn(std::string message) { warnings_.push_back(std::move(message)); }
    const std::vector<std::string>& warnings() const noexcept { return warnings_; }
    bool empty() const noexcept { return warnings_.empty(); }
    void clear() noexcept { warnings_.clear(); }

private:
    std::vector<std::string> warnings_;
};

inline void warn(Diagnostics* sink, std::string message) {
    if (sink) sink->warn(std::move(message));
}

}  // namespace sllm
