#include "jep/trees.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <unordered_map>

#include "jep/errors.hpp"

namespace jep {

const std::string kUpToken = "↑";  // ↑

namespace {

// ---------------------------------------------------------------------------
// s-expression parsing, shared by both tree kinds

struct RawSexp {
    std::string token;
    std::vector<RawSexp> children;
    int line = 1;
    int column = 1;
};

struct SexpParser {
    std::string_view text;
    std::size_t pos = 0;
    int line = 1;
    int column = 1;

    void advance() {
        if (text[pos] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
        ++pos;
    }

    void skip_space() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) advance();
    }

    [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, line, column); }

    RawSexp parse_node() {
        skip_space();
        if (pos >= text.size() || text[pos] != '(') fail("expected '('");
        RawSexp node;
        node.line = line;
        node.column = column;
        advance();
        skip_space();
        std::size_t start = pos;
        while (pos < text.size() && text[pos] != '(' && text[pos] != ')' &&
               !std::isspace(static_cast<unsigned char>(text[pos])))
            advance();
        if (pos == start) fail("expected a label token");
        node.token = std::string(text.substr(start, pos - start));
        skip_space();
        while (pos < text.size() && text[pos] == '(') {
            node.children.push_back(parse_node());
            skip_space();
        }
        if (pos >= text.size() || text[pos] != ')') fail("expected ')'");
        advance();
        return node;
    }

    RawSexp parse_document() {
        RawSexp node = parse_node();
        skip_space();
        if (pos != text.size()) fail("trailing input after tree");
        return node;
    }
};

int label_of(const LabelSet& labels, const RawSexp& node) {
    auto idx = labels.index_of(node.token);
    if (!idx) throw ParseError("unknown label '" + node.token + "'", node.line, node.column);
    return *idx;
}

void append_label(std::string& out, const LabelSet& labels, int index) {
    out += labels.name(index);
}

}  // namespace

// ---------------------------------------------------------------------------
// BinaryTree

BinaryTree BinaryTree::leaf(LabelSetPtr labels, int label) {
    if (label < 0 || label >= labels->size()) throw JepError("label index out of range");
    auto node = std::make_shared<Node>(Node{label, nullptr, nullptr, 1});
    return BinaryTree(std::move(labels), std::move(node));
}

BinaryTree BinaryTree::node(int label, const BinaryTree& first, const BinaryTree& second) {
    require_same_labels(*first.labels(), *second.labels(), "binary node");
    if (label < 0 || label >= first.labels()->size()) throw JepError("label index out of range");
    auto n = std::make_shared<Node>(
        Node{label, first.root(), second.root(), 1 + first.size() + second.size()});
    return BinaryTree(first.labels(), std::move(n));
}

namespace {

int compare_binary_nodes(const BinaryTree::Node* a, const BinaryTree::Node* b) {
    if (a == b) return 0;
    if (a->size != b->size) return a->size < b->size ? -1 : 1;
    if (a->label != b->label) return a->label < b->label ? -1 : 1;
    if (!a->left) return 0;
    if (int c = compare_binary_nodes(a->left.get(), b->left.get())) return c;
    return compare_binary_nodes(a->right.get(), b->right.get());
}

BinaryTree::NodePtr canonical_binary(const BinaryTree::NodePtr& n) {
    if (!n->left) return n;
    auto l = canonical_binary(n->left);
    auto r = canonical_binary(n->right);
    if (compare_binary_nodes(l.get(), r.get()) > 0) std::swap(l, r);
    if (l == n->left && r == n->right) return n;
    return std::make_shared<BinaryTree::Node>(BinaryTree::Node{n->label, l, r, n->size});
}

void binary_sexpr(std::string& out, const LabelSet& labels, const BinaryTree::Node* n) {
    out += '(';
    append_label(out, labels, n->label);
    if (n->left) {
        out += ' ';
        binary_sexpr(out, labels, n->left.get());
        out += ' ';
        binary_sexpr(out, labels, n->right.get());
    }
    out += ')';
}

}  // namespace

BinaryTree BinaryTree::canonical() const { return BinaryTree(labels_, canonical_binary(root_)); }

std::string BinaryTree::to_sexpr() const {
    std::string out;
    binary_sexpr(out, *labels_, root_.get());
    return out;
}

BinaryTree BinaryTree::parse(LabelSetPtr labels, std::string_view text) {
    SexpParser parser{text};
    RawSexp raw = parser.parse_document();
    std::function<BinaryTree(const RawSexp&)> build = [&](const RawSexp& node) -> BinaryTree {
        int label = label_of(*labels, node);
        if (node.children.empty()) return BinaryTree::leaf(labels, label);
        if (node.children.size() != 2)
            throw ParseError("binary node must have exactly 0 or 2 children", node.line,
                             node.column);
        return BinaryTree::node(label, build(node.children[0]), build(node.children[1]));
    };
    return build(raw);
}

int BinaryTree::compare(const BinaryTree& a, const BinaryTree& b) {
    return compare_binary_nodes(a.root_.get(), b.root_.get());
}

bool BinaryTree::equivalent(const BinaryTree& other) const {
    return compare(canonical(), other.canonical()) == 0;
}

// ---------------------------------------------------------------------------
// GeneralTree

GeneralTree GeneralTree::leaf(LabelSetPtr labels, int label, int tag) {
    if (label < 0 || label >= labels->size()) throw JepError("label index out of range");
    auto node = std::make_shared<Node>(Node{label, tag, {}, 1});
    return GeneralTree(std::move(labels), std::move(node));
}

GeneralTree GeneralTree::node(int label, const std::vector<GeneralTree>& children) {
    if (children.size() == 1)
        throw ArityError("internal nodes must have at least two children");
    if (children.empty()) throw ArityError("use leaf() for childless nodes");
    for (std::size_t i = 1; i < children.size(); ++i)
        require_same_labels(*children[0].labels(), *children[i].labels(), "general node");
    if (label < 0 || label >= children[0].labels()->size())
        throw JepError("label index out of range");
    int size = 1;
    std::vector<NodePtr> kids;
    kids.reserve(children.size());
    for (const auto& c : children) {
        size += c.size();
        kids.push_back(c.root());
    }
    auto n = std::make_shared<Node>(Node{label, -1, std::move(kids), size});
    return GeneralTree(children[0].labels(), std::move(n));
}

namespace {

int compare_general_nodes(const GeneralTree::Node* a, const GeneralTree::Node* b) {
    if (a == b) return 0;
    if (a->size != b->size) return a->size < b->size ? -1 : 1;
    if (a->label != b->label) return a->label < b->label ? -1 : 1;
    if (a->children.size() != b->children.size())
        return a->children.size() < b->children.size() ? -1 : 1;
    for (std::size_t i = 0; i < a->children.size(); ++i)
        if (int c = compare_general_nodes(a->children[i].get(), b->children[i].get())) return c;
    if (a->tag != b->tag) return a->tag < b->tag ? -1 : 1;
    return 0;
}

GeneralTree::NodePtr canonical_general(const GeneralTree::NodePtr& n) {
    if (n->children.empty()) return n;
    std::vector<GeneralTree::NodePtr> kids;
    kids.reserve(n->children.size());
    bool changed = false;
    for (const auto& c : n->children) {
        kids.push_back(canonical_general(c));
        if (kids.back() != c) changed = true;
    }
    auto less = [](const GeneralTree::NodePtr& a, const GeneralTree::NodePtr& b) {
        return compare_general_nodes(a.get(), b.get()) < 0;
    };
    if (!std::is_sorted(kids.begin(), kids.end(), less)) {
        std::sort(kids.begin(), kids.end(), less);
        changed = true;
    }
    if (!changed) return n;
    return std::make_shared<GeneralTree::Node>(
        GeneralTree::Node{n->label, n->tag, std::move(kids), n->size});
}

void general_sexpr(std::string& out, const LabelSet& labels, const GeneralTree::Node* n) {
    out += '(';
    append_label(out, labels, n->label);
    for (const auto& c : n->children) {
        out += ' ';
        general_sexpr(out, labels, c.get());
    }
    out += ')';
}

}  // namespace

GeneralTree GeneralTree::canonical() const {
    return GeneralTree(labels_, canonical_general(root_));
}

std::string GeneralTree::to_sexpr() const {
    std::string out;
    general_sexpr(out, *labels_, root_.get());
    return out;
}

GeneralTree GeneralTree::parse(LabelSetPtr labels, std::string_view text) {
    SexpParser parser{text};
    RawSexp raw = parser.parse_document();
    std::function<GeneralTree(const RawSexp&)> build = [&](const RawSexp& node) -> GeneralTree {
        int label = label_of(*labels, node);
        if (node.children.empty()) return GeneralTree::leaf(labels, label);
        if (node.children.size() == 1)
            throw ParseError("internal nodes must have at least two children", node.line,
                             node.column);
        std::vector<GeneralTree> kids;
        kids.reserve(node.children.size());
        for (const auto& c : node.children) kids.push_back(build(c));
        return GeneralTree::node(label, kids);
    };
    return build(raw);
}

int GeneralTree::compare(const GeneralTree& a, const GeneralTree& b) {
    return compare_general_nodes(a.root_.get(), b.root_.get());
}

bool GeneralTree::equivalent(const GeneralTree& other) const {
    return compare(canonical(), other.canonical()) == 0;
}

// ---------------------------------------------------------------------------
// Topological containment

namespace {

template <typename Node>
void collect(const Node* n, std::vector<const Node*>& out,
             std::unordered_map<const Node*, int>& ids) {
    ids.emplace(n, static_cast<int>(out.size()));
    out.push_back(n);
    if constexpr (std::is_same_v<Node, BinaryTree::Node>) {
        if (n->left) {
            collect(n->left.get(), out, ids);
            collect(n->right.get(), out, ids);
        }
    } else {
        for (const auto& c : n->children) collect(c.get(), out, ids);
    }
}

class BinaryMatcher {
  public:
    BinaryMatcher(const BinaryTree& host, const BinaryTree& pattern) {
        collect(host.root().get(), hosts_, host_id_);
        collect(pattern.root().get(), pats_, pat_id_);
        match_.assign(pats_.size() * hosts_.size(), -1);
        down_.assign(pats_.size() * hosts_.size(), -1);
    }

    bool contains() { return down(pats_[0], hosts_[0]); }

  private:
    bool match(const BinaryTree::Node* p, const BinaryTree::Node* h) {
        int8_t& memo = match_[pat_id_[p] * hosts_.size() + host_id_[h]];
        if (memo >= 0) return memo != 0;
        bool ok = false;
        if (p->label == h->label) {
            if (!p->left) {
                ok = true;
            } else if (h->left) {
                ok = (down(p->left.get(), h->left.get()) && down(p->right.get(), h->right.get())) ||
                     (down(p->left.get(), h->right.get()) && down(p->right.get(), h->left.get()));
            }
        }
        memo = ok ? 1 : 0;
        return ok;
    }

    bool down(const BinaryTree::Node* p, const BinaryTree::Node* h) {
        int8_t& memo = down_[pat_id_[p] * hosts_.size() + host_id_[h]];
        if (memo >= 0) return memo != 0;
        bool ok = match(p, h);
        if (!ok && h->left)
            ok = down(p, h->left.get()) || down(p, h->right.get());
        memo = ok ? 1 : 0;
        return ok;
    }

    std::vector<const BinaryTree::Node*> hosts_, pats_;
    std::unordered_map<const BinaryTree::Node*, int> host_id_, pat_id_;
    std::vector<int8_t> match_, down_;
};

class GeneralMatcher {
  public:
    GeneralMatcher(const GeneralTree& host, const GeneralTree& pattern) {
        collect(host.root().get(), hosts_, host_id_);
        collect(pattern.root().get(), pats_, pat_id_);
        match_.assign(pats_.size() * hosts_.size(), -1);
        down_.assign(pats_.size() * hosts_.size(), -1);
    }

    bool contains() { return down(pats_[0], hosts_[0]); }

  private:
    // Injective assignment of pattern children into distinct host child
    // branches, by augmenting paths.
    bool augment(const GeneralTree::Node* p, const GeneralTree::Node* h, std::size_t pi,
                 std::vector<int>& assigned_to, std::vector<char>& visited) {
        for (std::size_t hj = 0; hj < h->children.size(); ++hj) {
            if (visited[hj]) continue;
            if (!down(p->children[pi].get(), h->children[hj].get())) continue;
            visited[hj] = 1;
            if (assigned_to[hj] < 0 ||
                augment(p, h, static_cast<std::size_t>(assigned_to[hj]), assigned_to, visited)) {
                assigned_to[hj] = static_cast<int>(pi);
                return true;
            }
        }
        return false;
    }

    bool match(const GeneralTree::Node* p, const GeneralTree::Node* h) {
        int8_t& memo = match_[pat_id_[p] * hosts_.size() + host_id_[h]];
        if (memo >= 0) return memo != 0;
        bool ok = false;
        if (p->label == h->label) {
            if (p->children.empty()) {
                ok = true;
            } else if (p->children.size() <= h->children.size()) {
                std::vector<int> assigned_to(h->children.size(), -1);
                ok = true;
                for (std::size_t pi = 0; pi < p->children.size() && ok; ++pi) {
                    std::vector<char> visited(h->children.size(), 0);
                    ok = augment(p, h, pi, assigned_to, visited);
                }
            }
        }
        memo = ok ? 1 : 0;
        return ok;
    }

    bool down(const GeneralTree::Node* p, const GeneralTree::Node* h) {
        int8_t& memo = down_[pat_id_[p] * hosts_.size() + host_id_[h]];
        if (memo >= 0) return memo != 0;
        bool ok = match(p, h);
        for (std::size_t i = 0; !ok && i < h->children.size(); ++i)
            ok = down(p, h->children[i].get());
        memo = ok ? 1 : 0;
        return ok;
    }

    std::vector<const GeneralTree::Node*> hosts_, pats_;
    std::unordered_map<const GeneralTree::Node*, int> host_id_, pat_id_;
    std::vector<int8_t> match_, down_;
};

}  // namespace

bool binary_contains(const BinaryTree& host, const BinaryTree& pattern) {
    require_same_labels(*host.labels(), *pattern.labels(), "binary_contains");
    return BinaryMatcher(host, pattern).contains();
}

bool general_contains(const GeneralTree& host, const GeneralTree& pattern) {
    require_same_labels(*host.labels(), *pattern.labels(), "general_contains");
    return GeneralMatcher(host, pattern).contains();
}

// ---------------------------------------------------------------------------
// Binary encoding of general trees

BinaryTree encode_general(const GeneralTree& t) {
    LabelSetPtr enc_labels = t.labels()->with_extra(kUpToken);
    const int up = enc_labels->size() - 1;
    std::function<BinaryTree(const GeneralTree::Node*)> enc =
        [&](const GeneralTree::Node* n) -> BinaryTree {
        if (n->children.empty()) return BinaryTree::leaf(enc_labels, n->label);
        const auto& kids = n->children;
        std::size_t x = kids.size();
        // chain tail: children x-2 and x-1 under the deepest chain node
        BinaryTree acc = BinaryTree::node(x == 2 ? n->label : up, enc(kids[x - 2].get()),
                                          enc(kids[x - 1].get()));
        for (std::size_t i = x - 2; i-- > 0;)
            acc = BinaryTree::node(i == 0 ? n->label : up, enc(kids[i].get()), acc);
        return acc;
    };
    return enc(t.root().get());
}

GeneralTree decode_general(const BinaryTree& t) {
    const LabelSet& enc_labels = *t.labels();
    if (enc_labels.size() < 2 || enc_labels.name(enc_labels.size() - 1) != kUpToken)
        throw InvalidEncodingError("label set does not end with the chain label");
    LabelSetPtr base = t.labels()->without_last();
    const int up = enc_labels.size() - 1;

    std::function<GeneralTree(const BinaryTree::Node*)> dec;
    std::function<void(const BinaryTree::Node*, std::vector<GeneralTree>&)> walk_chain =
        [&](const BinaryTree::Node* n, std::vector<GeneralTree>& out) {
            const auto* a = n->left.get();
            const auto* b = n->right.get();
            bool ua = a->label == up;
            bool ub = b->label == up;
            if (ua && ub)
                throw InvalidEncodingError("two chain children under one node");
            if (!ua && !ub) {
                out.push_back(dec(a));
                out.push_back(dec(b));
                return;
            }
            const auto* chain = ua ? a : b;
            const auto* subtree = ua ? b : a;
            if (!chain->left)
                throw InvalidEncodingError("chain label on a leaf");
            out.push_back(dec(subtree));
            walk_chain(chain, out);
        };
    dec = [&](const BinaryTree::Node* n) -> GeneralTree {
        if (n->label == up)
            throw InvalidEncodingError("chain label at a subtree root");
        if (!n->left) return GeneralTree::leaf(base, n->label);
        std::vector<GeneralTree> kids;
        walk_chain(n, kids);
        return GeneralTree::node(n->label, kids);
    };
    return dec(t.root().get());
}

// ---------------------------------------------------------------------------
// Enumeration

std::vector<BinaryTree> enumerate_binary(LabelSetPtr labels, int max_nodes, std::size_t cap) {
    if (max_nodes < 1) throw JepError("max_nodes must be at least 1");
    const int k = labels->size();
    std::vector<std::vector<BinaryTree>> by_size(max_nodes + 1);
    std::size_t total = 0;
    auto push = [&](int size, BinaryTree t) {
        if (++total > cap)
            throw SizeLimitError("enumerate_binary would exceed the cap of " +
                                 std::to_string(cap) + " trees");
        by_size[size].push_back(std::move(t));
    };
    for (int label = 0; label < k; ++label) push(1, BinaryTree::leaf(labels, label));
    // nested loops emit each size bucket in structural order: label, then
    // left subtree (smaller sizes first), then right subtree
    for (int n = 3; n <= max_nodes; n += 2) {
        for (int label = 0; label < k; ++label)
            for (int l = 1; l <= n - 2; l += 2)
                for (const auto& left : by_size[l])
                    for (const auto& right : by_size[n - 1 - l])
                        push(n, BinaryTree::node(label, left, right));
    }
    std::vector<BinaryTree> out;
    out.reserve(total);
    for (int n = 1; n <= max_nodes; ++n)
        for (auto& t : by_size[n]) out.push_back(std::move(t));
    return out;
}

std::vector<GeneralTree> enumerate_general(LabelSetPtr labels, int max_nodes, std::size_t cap) {
    if (max_nodes < 1) throw JepError("max_nodes must be at least 1");
    const int k = labels->size();
    std::vector<std::vector<GeneralTree>> by_size(max_nodes + 1);
    std::size_t total = 0;
    auto guard = [&]() {
        if (++total > cap)
            throw SizeLimitError("enumerate_general would exceed the cap of " +
                                 std::to_string(cap) + " trees");
    };
    for (int label = 0; label < k; ++label) {
        guard();
        by_size[1].push_back(GeneralTree::leaf(labels, label));
    }
    auto valid_size = [](int s) { return s == 1 || s >= 3; };
    for (int n = 3; n <= max_nodes; ++n) {
        // sequences of >= 2 children with sizes summing to n-1
        std::vector<GeneralTree> prefix;
        std::function<void(int, int)> gen_children = [&](int remaining, int parts) {
            if (remaining == 0) {
                if (parts >= 2) {
                    for (int label = 0; label < k; ++label) {
                        guard();
                        by_size[n].push_back(GeneralTree::node(label, prefix));
                    }
                }
                return;
            }
            for (int s = 1; s <= remaining; ++s) {
                if (!valid_size(s)) continue;
                for (const auto& child : by_size[s]) {
                    prefix.push_back(child);
                    gen_children(remaining - s, parts + 1);
                    prefix.pop_back();
                }
            }
        };
        gen_children(n - 1, 0);
        std::sort(by_size[n].begin(), by_size[n].end(),
                  [](const GeneralTree& a, const GeneralTree& b) {
                      return GeneralTree::compare(a, b) < 0;
                  });
    }
    std::vector<GeneralTree> out;
    for (int n = 1; n <= max_nodes; ++n)
        for (auto& t : by_size[n]) out.push_back(std::move(t));
    return out;
}

}  // namespace jep
