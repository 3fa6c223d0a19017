#include "profset/model.hpp"

#include <algorithm>
#include <chrono>
#include <optional>

#include "profset/errors.hpp"

namespace profset {
namespace {

/// Branch-and-bound engine behind solve_exact. The value search branches on
/// multi-item set members first: those items carry all of the bound's
/// optimism (an undecided set credits its whole margin to one member), so
/// deciding them early collapses the bound to the exact completion value and
/// the rest of the tree prunes immediately. The selection itself is then
/// rebuilt in index order, keeping an item exactly when the optimal value
/// stays reachable with it committed, which reproduces the documented
/// tie-break: the first optimum in include-first index-order enumeration.
class Search {
public:
    Search(const ProfsetModel& model, std::uint64_t node_budget)
        : model_(model),
          n_(model.items.size()),
          ncat_(model.category_ids.size()),
          budget_(node_budget) {
        own_net_.assign(n_, 0);
        for (std::size_t i = 0; i < n_; ++i) own_net_[i] -= model.items[i].cost.minor_units;

        item_multi_.resize(n_);
        for (const auto& set : model_.sets) {
            if (set.items.size() == 1) {
                own_net_[set.items.items()[0]] += set.margin.minor_units;
            } else {
                std::uint32_t idx = static_cast<std::uint32_t>(multi_.size());
                multi_.push_back({set.margin.minor_units, set.items.items()});
                for (ItemId id : set.items) item_multi_[id].push_back(idx);
                alive_multi_count_ += 1;
            }
        }

        by_net_desc_.resize(n_);
        for (std::uint32_t i = 0; i < n_; ++i) by_net_desc_[i] = i;
        std::sort(by_net_desc_.begin(), by_net_desc_.end(), [&](std::uint32_t a, std::uint32_t b) {
            if (own_net_[a] != own_net_[b]) return own_net_[a] > own_net_[b];
            return a < b;
        });

        state_.assign(n_, kUndecided);
        chosen_.assign(ncat_, 0);
        undecided_.assign(ncat_, 0);
        for (std::uint32_t c : model_.item_category) ++undecided_[c];
        set_undecided_.reserve(multi_.size());
        set_out_.assign(multi_.size(), 0);
        for (const MultiSet& s : multi_)
            set_undecided_.push_back(static_cast<std::uint32_t>(s.members.size()));
        need_scratch_.resize(ncat_);
        cap_scratch_.resize(ncat_);
        taken_scratch_.resize(ncat_);
        credit_.assign(n_, 0);
        boosted_.reserve(multi_.size());

        order_.reserve(n_);
        std::vector<bool> placed(n_, false);
        for (const MultiSet& s : multi_)
            for (ItemId m : s.members)
                if (!placed[m]) {
                    placed[m] = true;
                    order_.push_back(m);
                }
        std::sort(order_.begin(), order_.end());
        for (std::uint32_t i = 0; i < n_; ++i)
            if (!placed[i]) order_.push_back(i);
    }

    std::uint64_t nodes() const { return nodes_; }

    /// Greedy feasible selection used to warm start the value search; the
    /// model has already been validated feasible.
    std::vector<std::uint32_t> greedy_selection() {
        std::vector<std::uint32_t> taken;
        auto b = bound_and_greedy(&taken);
        if (!b) throw InfeasibleError("infeasible: no selection satisfies the count constraints");
        std::sort(taken.begin(), taken.end());
        return taken;
    }

    /// Phase 1: optimal objective value. The warm selection seeds both the
    /// incumbent value and the witness used by phase 2.
    std::int64_t best_value(std::int64_t warm_value, std::vector<std::uint32_t> warm) {
        best_ = warm_value;
        best_leaf_ = std::move(warm);
        dfs_value(0);
        return best_;
    }

    /// Phase 2: lexicographically smallest selection achieving `target`.
    /// Walks items in index order and commits each include exactly when some
    /// completion still reaches the target; the witness selection skips the
    /// reachability search for items it already contains.
    std::vector<std::uint32_t> first_selection_with(std::int64_t target) {
        target_ = target;
        std::vector<bool> in_witness(n_, false);
        for (std::uint32_t i : best_leaf_) in_witness[i] = true;

        for (std::uint32_t i = 0; i < n_; ++i) {
            if (total_in_ == model_.item_max) {
                exclude(i);
                continue;
            }
            if (in_witness[i]) {
                include(i);
                continue;
            }
            bool hit = false;
            std::uint32_t c = model_.item_category[i];
            if (chosen_[c] < model_.category_cap[c]) {
                include(i);
                hit = dfs_hit(0);
                if (!hit) undo_include(i);
            }
            if (hit) {
                in_witness.assign(n_, false);
                for (std::uint32_t w : found_) in_witness[w] = true;
            } else {
                exclude(i);
            }
        }

        std::vector<std::uint32_t> selected;
        for (std::uint32_t i = 0; i < n_; ++i)
            if (state_[i] == kIn) selected.push_back(i);
        if (selected.size() != model_.item_max || current_ != target_)
            throw DataError("internal: solver lost the optimal selection");
        return selected;
    }

private:
    static constexpr std::int8_t kUndecided = 0, kIn = 1, kOut = 2;

    struct MultiSet {
        std::int64_t margin;
        std::vector<ItemId> members; // ascending
    };

    void charge_node() {
        if (++nodes_ > budget_)
            throw BudgetError("solver node budget (" + std::to_string(budget_) + ") exceeded");
    }

    void include(std::uint32_t i) {
        state_[i] = kIn;
        ++total_in_;
        std::uint32_t c = model_.item_category[i];
        ++chosen_[c];
        --undecided_[c];
        current_ += own_net_[i];
        for (std::uint32_t s : item_multi_[i]) {
            if (--set_undecided_[s] == 0 && set_out_[s] == 0) {
                current_ += multi_[s].margin;       // covered
                alive_multi_count_ -= 1;
            }
        }
    }

    void undo_include(std::uint32_t i) {
        for (std::uint32_t s : item_multi_[i]) {
            if (set_undecided_[s]++ == 0 && set_out_[s] == 0) {
                current_ -= multi_[s].margin;
                alive_multi_count_ += 1;
            }
        }
        current_ -= own_net_[i];
        std::uint32_t c = model_.item_category[i];
        --chosen_[c];
        ++undecided_[c];
        --total_in_;
        state_[i] = kUndecided;
    }

    void exclude(std::uint32_t i) {
        state_[i] = kOut;
        std::uint32_t c = model_.item_category[i];
        --undecided_[c];
        for (std::uint32_t s : item_multi_[i]) {
            --set_undecided_[s];
            if (set_out_[s]++ == 0) alive_multi_count_ -= 1; // alive -> dead
        }
    }

    void undo_exclude(std::uint32_t i) {
        for (std::uint32_t s : item_multi_[i]) {
            ++set_undecided_[s];
            if (--set_out_[s] == 0) alive_multi_count_ += 1;
        }
        std::uint32_t c = model_.item_category[i];
        ++undecided_[c];
        state_[i] = kUndecided;
    }

    bool needs_met() const {
        for (std::size_t c = 0; c < ncat_; ++c)
            if (chosen_[c] < model_.category_min[c]) return false;
        return true;
    }

    /// Admissible upper bound on the best completion of the current node.
    /// Each still-coverable multi-item set credits its margin to its
    /// smallest undecided member (the set cannot be realized without that
    /// item), then the remaining slots are filled greedily by credited net
    /// gain under the per-category minima and caps. The greedy fill is an
    /// exact maximizer of the credited gains over feasible completions, so
    /// the result dominates every completion's true value.
    /// Returns nullopt when no feasible completion exists. When `taken` is
    /// non-null the greedy picks are recorded (used for the warm start).
    std::optional<std::int64_t> bound_and_greedy(std::vector<std::uint32_t>* taken = nullptr) {
        const std::uint32_t slots_total = model_.item_max - total_in_;
        std::uint64_t needs_total = 0;
        std::uint64_t reachable = 0;
        for (std::size_t c = 0; c < ncat_; ++c) {
            std::uint32_t minimum = model_.category_min[c];
            std::uint32_t need = chosen_[c] >= minimum ? 0 : minimum - chosen_[c];
            std::uint32_t cap_rem = model_.category_cap[c] >= chosen_[c]
                                        ? model_.category_cap[c] - chosen_[c]
                                        : 0;
            cap_rem = std::min(cap_rem, undecided_[c]);
            if (need > cap_rem) return std::nullopt;
            need_scratch_[c] = need;
            cap_scratch_[c] = cap_rem;
            taken_scratch_[c] = 0;
            needs_total += need;
            reachable += cap_rem;
        }
        if (needs_total > slots_total) return std::nullopt;
        if (reachable < slots_total) return std::nullopt;

        boosted_.clear();
        if (alive_multi_count_ > 0) {
            for (std::uint32_t s = 0; s < multi_.size(); ++s) {
                if (set_out_[s] != 0 || set_undecided_[s] == 0) continue;
                for (ItemId m : multi_[s].members) {
                    if (state_[m] != kUndecided) continue;
                    if (credit_[m] == 0) boosted_.push_back(m);
                    credit_[m] += multi_[s].margin;
                    break;
                }
            }
            std::sort(boosted_.begin(), boosted_.end(), [&](std::uint32_t a, std::uint32_t b) {
                std::int64_t ga = own_net_[a] + credit_[a];
                std::int64_t gb = own_net_[b] + credit_[b];
                if (ga != gb) return ga > gb;
                return a < b;
            });
        }

        // merged walk over the precomputed order (uncredited items) and the
        // credited ones, by gain descending then index ascending
        std::int64_t gain = 0;
        std::uint32_t slots = slots_total;
        std::size_t ai = 0, bi = 0;
        while (slots > 0) {
            while (ai < n_ &&
                   (state_[by_net_desc_[ai]] != kUndecided || credit_[by_net_desc_[ai]] != 0))
                ++ai;
            std::uint32_t i;
            std::int64_t g;
            if (bi < boosted_.size() &&
                (ai == n_ || own_net_[boosted_[bi]] + credit_[boosted_[bi]] >
                                 own_net_[by_net_desc_[ai]] ||
                 (own_net_[boosted_[bi]] + credit_[boosted_[bi]] == own_net_[by_net_desc_[ai]] &&
                  boosted_[bi] < by_net_desc_[ai]))) {
                i = boosted_[bi++];
                g = own_net_[i] + credit_[i];
            } else if (ai < n_) {
                i = by_net_desc_[ai++];
                g = own_net_[i];
            } else {
                break;
            }
            std::uint32_t c = model_.item_category[i];
            if (taken_scratch_[c] >= cap_scratch_[c]) continue;
            if (need_scratch_[c] > 0) {
                --need_scratch_[c];
                --needs_total;
            } else if (slots <= needs_total) {
                continue; // remaining slots are reserved for category minima
            }
            ++taken_scratch_[c];
            --slots;
            gain += g;
            if (taken) taken->push_back(i);
        }
        for (std::uint32_t i : boosted_) credit_[i] = 0;
        return current_ + gain;
    }

    void dfs_value(std::uint32_t pos) {
        charge_node();
        if (total_in_ == model_.item_max) {
            if (needs_met() && current_ > best_) {
                best_ = current_;
                best_leaf_.clear();
                for (std::uint32_t i = 0; i < n_; ++i)
                    if (state_[i] == kIn) best_leaf_.push_back(i);
            }
            return;
        }
        if (pos == n_) return;
        auto b = bound_and_greedy();
        if (!b || *b <= best_) return;

        std::uint32_t i = order_[pos];
        std::uint32_t c = model_.item_category[i];
        if (chosen_[c] < model_.category_cap[c]) {
            include(i);
            dfs_value(pos + 1);
            undo_include(i);
        }
        exclude(i);
        dfs_value(pos + 1);
        undo_exclude(i);
    }

    /// True when some completion of the current committed state reaches
    /// target_ exactly; the achieving selection lands in found_. Skips items
    /// the caller already committed.
    bool dfs_hit(std::uint32_t pos) {
        charge_node();
        if (total_in_ == model_.item_max) {
            if (!needs_met() || current_ != target_) return false;
            found_.clear();
            for (std::uint32_t i = 0; i < n_; ++i)
                if (state_[i] == kIn) found_.push_back(i);
            return true;
        }
        while (pos < n_ && state_[order_[pos]] != kUndecided) ++pos;
        if (pos == n_) return false;
        auto b = bound_and_greedy();
        if (!b || *b < target_) return false;

        std::uint32_t i = order_[pos];
        std::uint32_t c = model_.item_category[i];
        if (chosen_[c] < model_.category_cap[c]) {
            include(i);
            bool hit = dfs_hit(pos + 1);
            undo_include(i);
            if (hit) return true;
        }
        exclude(i);
        bool hit = dfs_hit(pos + 1);
        undo_exclude(i);
        return hit;
    }

    const ProfsetModel& model_;
    std::size_t n_;
    std::size_t ncat_;
    std::uint64_t budget_;
    std::uint64_t nodes_ = 0;

    std::vector<std::int64_t> own_net_;
    std::vector<MultiSet> multi_;
    std::vector<std::vector<std::uint32_t>> item_multi_;
    std::vector<std::uint32_t> by_net_desc_;
    std::vector<std::uint32_t> order_; // multi-set members first, then the rest

    std::vector<std::int8_t> state_;
    std::vector<std::uint32_t> chosen_;
    std::vector<std::uint32_t> undecided_;
    std::vector<std::uint32_t> set_undecided_;
    std::vector<std::uint32_t> set_out_;
    std::int64_t current_ = 0;
    std::int64_t alive_multi_count_ = 0;
    std::uint32_t total_in_ = 0;

    std::vector<std::uint32_t> need_scratch_, cap_scratch_, taken_scratch_;
    std::vector<std::int64_t> credit_;
    std::vector<std::uint32_t> boosted_;

    std::int64_t best_ = 0;
    std::int64_t target_ = 0;
    std::vector<std::uint32_t> best_leaf_;
    std::vector<std::uint32_t> found_;
};

Solution finish_solution(const ProfsetModel& model, std::vector<std::uint32_t> selected,
                         std::uint64_t nodes, double wall_seconds) {
    Solution s;
    s.selected = std::move(selected);
    s.objective = objective_value(model, s.selected);
    std::vector<bool> in(model.items.size(), false);
    for (std::uint32_t i : s.selected) in[i] = true;
    for (const auto& set : model.sets) {
        bool covered = true;
        for (ItemId id : set.items)
            if (!in[id]) {
                covered = false;
                break;
            }
        if (covered) s.active_sets.push_back(set.items);
    }
    s.proof = Solution::Proof::optimal;
    s.nodes_explored = nodes;
    s.wall_seconds = wall_seconds;
    return s;
}

} // namespace

Solution solve_brute(const ProfsetModel& model) {
    validate_model(model);
    if (model.items.size() > 25)
        throw DataError("solve_brute guard: " + std::to_string(model.items.size()) +
                        " items exceeds the 25-item limit");

    const std::size_t n = model.items.size();
    const std::size_t ncat = model.category_ids.size();
    const auto start = std::chrono::steady_clock::now();

    std::vector<std::uint32_t> sizes(ncat, 0), chosen(ncat, 0), undecided(ncat, 0);
    for (std::uint32_t c : model.item_category) {
        ++sizes[c];
        ++undecided[c];
    }

    std::vector<std::uint32_t> current;
    std::vector<std::uint32_t> best_sel;
    std::int64_t best = 0;
    bool have_best = false;
    std::uint64_t leaves = 0;

    // Plain include-first enumeration; first optimum found is lex-smallest.
    auto dfs = [&](auto&& self, std::uint32_t depth) -> void {
        if (current.size() == model.item_max) {
            for (std::size_t c = 0; c < ncat; ++c)
                if (chosen[c] < model.category_min[c]) return;
            ++leaves;
            std::int64_t value = objective_value(model, current).minor_units;
            if (!have_best || value > best) {
                best = value;
                best_sel = current;
                have_best = true;
            }
            return;
        }
        if (depth == n) return;
        // enough items left to fill the selection?
        if (current.size() + (n - depth) < model.item_max) return;

        std::uint32_t c = model.item_category[depth];
        if (chosen[c] < model.category_cap[c]) {
            ++chosen[c];
            --undecided[c];
            current.push_back(depth);
            self(self, depth + 1);
            current.pop_back();
            --chosen[c];
            ++undecided[c];
        }
        // excluding depth must leave the category able to reach its minimum
        if (undecided[c] - 1 + chosen[c] >= model.category_min[c]) {
            --undecided[c];
            self(self, depth + 1);
            ++undecided[c];
        }
    };
    dfs(dfs, 0);

    if (!have_best)
        throw InfeasibleError("infeasible: no selection satisfies the count constraints");
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return finish_solution(model, std::move(best_sel), leaves, secs);
}

Solution solve_exact(const ProfsetModel& model, const SolveOptions& options) {
    validate_model(model);
    const auto start = std::chrono::steady_clock::now();

    Search search(model, options.node_budget);
    std::vector<std::uint32_t> warm = search.greedy_selection();
    std::int64_t warm_value = objective_value(model, warm).minor_units;

    std::int64_t optimum = search.best_value(warm_value, std::move(warm));
    std::vector<std::uint32_t> selected = search.first_selection_with(optimum);

    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return finish_solution(model, std::move(selected), search.nodes(), secs);
}

} // namespace profset
