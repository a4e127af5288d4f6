#include "jep/labels.hpp"

#include <algorithm>
#include <set>

#include "jep/errors.hpp"

namespace jep {

std::shared_ptr<const LabelSet> LabelSet::make(int size) {
    if (size < 1) throw JepError("label set must have at least one label");
    std::vector<std::string> names;
    names.reserve(size);
    for (int i = 0; i < size; ++i) names.push_back(std::to_string(i));
    return std::shared_ptr<const LabelSet>(new LabelSet(std::move(names)));
}

std::shared_ptr<const LabelSet> LabelSet::from_tokens(std::vector<std::string> tokens) {
    if (tokens.empty()) throw JepError("label set must have at least one label");
    std::set<std::string> seen;
    for (const auto& t : tokens) {
        if (t.empty()) throw JepError("label tokens must be nonempty");
        if (!seen.insert(t).second) throw JepError("duplicate label token '" + t + "'");
    }
    return std::shared_ptr<const LabelSet>(new LabelSet(std::move(tokens)));
}

std::optional<int> LabelSet::index_of(const std::string& token) const {
    auto it = std::find(names_.begin(), names_.end(), token);
    if (it == names_.end()) return std::nullopt;
    return static_cast<int>(it - names_.begin());
}

std::shared_ptr<const LabelSet> LabelSet::with_extra(const std::string& token) const {
    if (index_of(token)) throw JepError("label token '" + token + "' already present");
    std::vector<std::string> names = names_;
    names.push_back(token);
    return from_tokens(std::move(names));
}

std::shared_ptr<const LabelSet> LabelSet::without_last() const {
    if (size() < 2) throw JepError("cannot drop the only label");
    std::vector<std::string> names(names_.begin(), names_.end() - 1);
    return from_tokens(std::move(names));
}

void require_same_labels(const LabelSet& a, const LabelSet& b, const char* context) {
    if (a != b)
        throw LabelMismatchError(std::string(context) + ": label sets differ");
}

}  // namespace jep
