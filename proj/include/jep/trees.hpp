#ifndef JEP_TREES_HPP
#define JEP_TREES_HPP

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "jep/labels.hpp"
#include "jep/util.hpp"

namespace jep {

/// Token used for the chain label introduced when encoding general trees as
/// binary trees, and reserved for that purpose.
extern const std::string kUpToken;

/// Full binary rooted labeled tree (every node has 0 or 2 children).
/// Children keep their construction order; `canonical()` produces the
/// order-normal form used for semantic identity. Immutable and cheap to copy.
class BinaryTree {
  public:
    struct Node {
        int label;
        std::shared_ptr<const Node> left;   // null for leaves
        std::shared_ptr<const Node> right;  // null for leaves
        int size;                           // node count of the subtree
    };
    using NodePtr = std::shared_ptr<const Node>;

    static BinaryTree leaf(LabelSetPtr labels, int label);
    static BinaryTree node(int label, const BinaryTree& first, const BinaryTree& second);

    const LabelSetPtr& labels() const { return labels_; }
    const NodePtr& root() const { return root_; }
    int size() const { return root_->size; }

    BinaryTree canonical() const;
    std::string to_sexpr() const;
    std::string canonical_key() const { return canonical().to_sexpr(); }

    static BinaryTree parse(LabelSetPtr labels, std::string_view text);

    /// Structural comparison on the stored form: size, then root label, then
    /// children left-to-right. Total order.
    static int compare(const BinaryTree& a, const BinaryTree& b);
    bool operator==(const BinaryTree& other) const { return compare(*this, other) == 0; }
    bool operator!=(const BinaryTree& other) const { return !(*this == other); }

    /// Order-insensitive identity (equality of canonical forms).
    bool equivalent(const BinaryTree& other) const;

  private:
    BinaryTree(LabelSetPtr labels, NodePtr root)
        : labels_(std::move(labels)), root_(std::move(root)) {}
    LabelSetPtr labels_;
    NodePtr root_;
};

/// Rooted labeled tree with arbitrary arity; internal nodes must have at
/// least two children. Leaves may carry an integer tag (vertex id); tags do
/// not participate in containment.
class GeneralTree {
  public:
    struct Node {
        int label;
        int tag;  // -1 when absent
        std::vector<std::shared_ptr<const Node>> children;
        int size;
    };
    using NodePtr = std::shared_ptr<const Node>;

    static GeneralTree leaf(LabelSetPtr labels, int label, int tag = -1);
    static GeneralTree node(int label, const std::vector<GeneralTree>& children);

    const LabelSetPtr& labels() const { return labels_; }
    const NodePtr& root() const { return root_; }
    int size() const { return root_->size; }

    GeneralTree canonical() const;
    std::string to_sexpr() const;  // tags are not serialized
    std::string canonical_key() const { return canonical().to_sexpr(); }

    static GeneralTree parse(LabelSetPtr labels, std::string_view text);

    static int compare(const GeneralTree& a, const GeneralTree& b);
    bool operator==(const GeneralTree& other) const { return compare(*this, other) == 0; }
    bool operator!=(const GeneralTree& other) const { return !(*this == other); }
    bool equivalent(const GeneralTree& other) const;

  private:
    GeneralTree(LabelSetPtr labels, NodePtr root)
        : labels_(std::move(labels)), root_(std::move(root)) {}
    LabelSetPtr labels_;
    NodePtr root_;
};

/// Topological containment of full binary trees: true iff there is a
/// label-preserving injection of `pattern` into `host` whose edge images are
/// edge-disjoint downward paths (children of a pattern node map into two
/// distinct child branches of the image).
bool binary_contains(const BinaryTree& host, const BinaryTree& pattern);

/// Topological containment of general trees; children of a pattern node must
/// map into pairwise distinct child branches of the image node.
bool general_contains(const GeneralTree& host, const GeneralTree& pattern);

/// Binary encoding of a general tree: a node with x >= 2 children becomes a
/// chain of x-1 nodes, the head keeping the original label and the rest
/// labeled with the extra chain label. Children are processed in stored
/// order. The result's label set is the input's plus the chain label.
BinaryTree encode_general(const GeneralTree& t);

/// Inverse of encode_general; the chain label must be the last label of the
/// input's label set. Rejects trees that are not valid encodings.
GeneralTree decode_general(const BinaryTree& t);

/// Every full binary labeled tree with at most max_nodes nodes, exactly once,
/// in size-then-structural order. Trees are order-distinct objects.
std::vector<BinaryTree> enumerate_binary(LabelSetPtr labels, int max_nodes,
                                         std::size_t cap = Caps().max_items);

/// Every general tree (internal arity >= 2) with at most max_nodes nodes, in
/// size-then-structural order.
std::vector<GeneralTree> enumerate_general(LabelSetPtr labels, int max_nodes,
                                           std::size_t cap = Caps().max_items);

}  // namespace jep

#endif
