#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace betting {

// Invariant-check outcome. `detail` names the first violation and is empty on pass.
struct Report {
    bool pass = true;
    std::string detail;

    static Report ok() { return {}; }
    static Report fail(std::string what) { return {false, std::move(what)}; }
    explicit operator bool() const { return pass; }
};

// Error signaled by operations whose preconditions are violated ("negative capital",
// "schedule exhausted", "incomplete table", "index overflow", "no description", ...).
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace betting
