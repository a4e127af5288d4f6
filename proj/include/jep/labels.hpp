#ifndef JEP_LABELS_HPP
#define JEP_LABELS_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace jep {

/// A finite set of k labels, identified by index 0..k-1, each with a distinct
/// printable token. Shared immutably between trees, automata and words.
class LabelSet {
  public:
    /// Labels named "0", "1", ..., "k-1".
    static std::shared_ptr<const LabelSet> make(int size);
    /// Labels with explicit tokens; tokens must be nonempty and distinct.
    static std::shared_ptr<const LabelSet> from_tokens(std::vector<std::string> tokens);

    int size() const { return static_cast<int>(names_.size()); }
    const std::string& name(int index) const { return names_.at(index); }
    const std::vector<std::string>& names() const { return names_; }
    std::optional<int> index_of(const std::string& token) const;

    /// A new label set with one extra label appended; rejects duplicates.
    std::shared_ptr<const LabelSet> with_extra(const std::string& token) const;
    /// A new label set with the last label removed.
    std::shared_ptr<const LabelSet> without_last() const;

    bool operator==(const LabelSet& other) const { return names_ == other.names_; }
    bool operator!=(const LabelSet& other) const { return !(*this == other); }

  private:
    explicit LabelSet(std::vector<std::string> names) : names_(std::move(names)) {}
    std::vector<std::string> names_;
};

using LabelSetPtr = std::shared_ptr<const LabelSet>;

/// Checks that two label sets agree; `context` names the operation for the error.
void require_same_labels(const LabelSet& a, const LabelSet& b, const char* context);

}  // namespace jep

#endif
