#include <catch_amalgamated.hpp>

#include <algorithm>
#include <filesystem>
#include <numeric>

#include "helpers.hpp"
#include "mibci/bagging.hpp"
#include "mibci/error.hpp"
#include "mibci/lda.hpp"
#include "mibci/model_io.hpp"

using namespace mibci;
using namespace mibci::test;
using Catch::Matchers::WithinAbs;

namespace {

struct Gaussians {
    Eigen::MatrixXd x;
    std::vector<Label> y;
};

// Two isotropic unit-variance clusters at -offset/2 and +offset/2 along axis 0.
Gaussians clusters(int n, int d, double offset, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    Gaussians g{Eigen::MatrixXd(n, d), {}};
    for (int i = 0; i < n; ++i) {
        const Label l = i % 2 ? Label::kPos : Label::kNeg;
        g.y.push_back(l);
        for (int j = 0; j < d; ++j) g.x(i, j) = normal(rng);
        g.x(i, 0) += 0.5 * offset * to_int(l);
    }
    return g;
}

LdaModel make_lda(std::initializer_list<double> w, double b) {
    LdaModel m;
    m.w = Eigen::Map<const Eigen::VectorXd>(w.begin(), static_cast<Eigen::Index>(w.size()));
    m.b = b;
    return m;
}

double accuracy(const std::vector<Label>& pred, const std::vector<Label>& truth) {
    int ok = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) ok += pred[i] == truth[i];
    return static_cast<double>(ok) / static_cast<double>(pred.size());
}

}  // namespace

TEST_CASE("symmetric clusters give the midpoint boundary") {
    Eigen::MatrixXd x(4, 2);
    x << -1.0, 1.0,
         -1.0, -1.0,
          1.0, 1.0,
          1.0, -1.0;
    const std::vector<Label> y{Label::kNeg, Label::kNeg, Label::kPos, Label::kPos};
    const LdaModel m = fit_lda(x, y);
    REQUIRE(m.w(0) > 0.0);
    REQUIRE_THAT(m.w(1), WithinAbs(0.0, 1e-12));
    REQUIRE_THAT(m.b, WithinAbs(0.0, 1e-12));
    REQUIRE_THAT(lda_score(m, Eigen::Vector2d(0.0, 5.0)), WithinAbs(0.0, 1e-12));
}

TEST_CASE("1-D threshold sits halfway between the means") {
    Eigen::MatrixXd x(6, 1);
    x << -1.0, 0.0, 1.0, 1.0, 2.0, 3.0;
    const std::vector<Label> y{Label::kNeg, Label::kNeg, Label::kNeg, Label::kPos, Label::kPos, Label::kPos};
    const LdaModel m = fit_lda(x, y);
    // Closed form: S_w = 4, ridge 1e-6 * 4, w = 2 / (4 (1 + 1e-6)), b = -w.
    const double w = 2.0 / (4.0 * (1.0 + 1e-6));
    REQUIRE_THAT(m.w(0), WithinAbs(w, 1e-12));
    REQUIRE_THAT(m.b, WithinAbs(-w, 1e-12));
    REQUIRE(lda_score(m, Eigen::VectorXd::Constant(1, 0.999)) < 0.0);
    REQUIRE(lda_score(m, Eigen::VectorXd::Constant(1, 1.001)) > 0.0);
    REQUIRE(lda_predict(m, Eigen::VectorXd::Constant(1, 2.0)) == Label::kPos);
    REQUIRE(lda_predict(m, Eigen::VectorXd::Constant(1, 0.0)) == Label::kNeg);
}

TEST_CASE("separable clusters are fit perfectly") {
    const Gaussians g = clusters(60, 3, 12.0, 4);
    const LdaModel m = fit_lda(g.x, g.y);
    for (Eigen::Index i = 0; i < g.x.rows(); ++i) {
        REQUIRE(lda_predict(m, g.x.row(i).transpose()) == g.y[static_cast<std::size_t>(i)]);
    }
    Eigen::VectorXd mu_pos = Eigen::VectorXd::Zero(3), mu_neg = Eigen::VectorXd::Zero(3);
    for (Eigen::Index i = 0; i < 60; ++i) (g.y[static_cast<std::size_t>(i)] == Label::kPos ? mu_pos : mu_neg) += g.x.row(i).transpose() / 30.0;
    REQUIRE(lda_score(m, mu_pos) > 0.0);
    REQUIRE(lda_score(m, mu_neg) < 0.0);
    REQUIRE_THAT(lda_score(m, 0.5 * (mu_pos + mu_neg)), WithinAbs(0.0, 1e-12));

    const Eigen::Vector3d x(0.3, -1.0, 2.0);
    REQUIRE_THAT(lda_score(m, 2.0 * x) - lda_score(m, x), WithinAbs(m.w.dot(x), 1e-12));
}

TEST_CASE("LDA is invariant to trial order") {
    const Gaussians g = clusters(40, 4, 2.0, 5);
    const LdaModel a = fit_lda(g.x, g.y);
    std::vector<Eigen::Index> perm(40);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), std::mt19937_64(9));
    Eigen::MatrixXd x(40, 4);
    std::vector<Label> y;
    for (Eigen::Index i = 0; i < 40; ++i) {
        x.row(i) = g.x.row(perm[static_cast<std::size_t>(i)]);
        y.push_back(g.y[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])]);
    }
    const LdaModel b = fit_lda(x, y);
    REQUIRE((a.w - b.w).cwiseAbs().maxCoeff() < 1e-10);
    REQUIRE_THAT(a.b, WithinAbs(b.b, 1e-10));
}

TEST_CASE("prediction conventions") {
    const LdaModel m = make_lda({1.0}, 0.0);
    REQUIRE(lda_predict(m, Eigen::VectorXd::Constant(1, 3.2)) == Label::kPos);
    REQUIRE(lda_predict(m, Eigen::VectorXd::Constant(1, -0.1)) == Label::kNeg);
    REQUIRE(lda_predict(m, Eigen::VectorXd::Constant(1, 0.0)) == Label::kPos);
    REQUIRE_THROWS_AS(lda_score(m, Eigen::Vector2d(1.0, 1.0)), InvalidArgument);

    // Positive rescaling of (w, b) never changes a prediction.
    const LdaModel base = make_lda({0.7, -1.3}, 0.4);
    const Gaussians g = clusters(50, 2, 1.0, 6);
    for (double c : {1e-3, 2.0, 1e4}) {
        LdaModel scaled = base;
        scaled.w *= c;
        scaled.b *= c;
        for (Eigen::Index i = 0; i < g.x.rows(); ++i) {
            REQUIRE(lda_predict(scaled, g.x.row(i).transpose()) == lda_predict(base, g.x.row(i).transpose()));
        }
    }
}

TEST_CASE("LDA input validation") {
    const Eigen::MatrixXd x = Eigen::MatrixXd::Random(4, 2);
    REQUIRE_THROWS_AS(fit_lda(x, std::vector<Label>(4, Label::kPos)), InvalidArgument);
    REQUIRE_THROWS_AS(fit_lda(x, std::vector<Label>{Label::kPos, Label::kPos, Label::kNeg, Label::kPos}),
                      InvalidArgument);
    REQUIRE_THROWS_AS(fit_lda(Eigen::MatrixXd(4, 0), std::vector<Label>{Label::kPos, Label::kPos, Label::kNeg, Label::kNeg}),
                      InvalidArgument);
}

TEST_CASE("bagging draws and determinism") {
    const Gaussians g = clusters(224, 3, 2.0, 7);
    const BaggingEnsemble e = fit_bagging(g.x, g.y, 50, 0.5, 11);
    REQUIRE(e.components.size() == 50);
    REQUIRE(e.rounds == 50);
    for (int r = 0; r < 50; ++r) REQUIRE(bootstrap_draw(g.y, 0.5, 11, r).size() == 112);

    const BaggingEnsemble again = fit_bagging(g.x, g.y, 50, 0.5, 11);
    for (std::size_t i = 0; i < 50; ++i) {
        REQUIRE(e.components[i].w == again.components[i].w);
        REQUIRE(e.components[i].b == again.components[i].b);
    }
    // Round r depends only on (seed, r): a shorter ensemble is a prefix.
    const BaggingEnsemble prefix = fit_bagging(g.x, g.y, 5, 0.5, 11);
    for (std::size_t i = 0; i < 5; ++i) REQUIRE(prefix.components[i].w == e.components[i].w);

    const BaggingEnsemble other = fit_bagging(g.x, g.y, 50, 0.5, 12);
    REQUIRE(other.components[0].w != e.components[0].w);
}

TEST_CASE("a single round reproduces its component") {
    const Gaussians g = clusters(40, 2, 1.5, 8);
    const BaggingEnsemble e = fit_bagging(g.x, g.y, 1, 0.5, 3);
    const Gaussians probe = clusters(200, 2, 1.5, 9);
    for (Eigen::Index i = 0; i < probe.x.rows(); ++i) {
        const Eigen::VectorXd x = probe.x.row(i).transpose();
        REQUIRE(bagging_predict(e, x) == lda_predict(e.components[0], x));
    }
}

TEST_CASE("majority vote and tie rule") {
    BaggingEnsemble e;
    for (int i = 0; i < 26; ++i) e.components.push_back(make_lda({-1.0}, 0.0));
    for (int i = 0; i < 24; ++i) e.components.push_back(make_lda({1.0}, 0.0));
    e.rounds = 50;
    const Eigen::VectorXd one = Eigen::VectorXd::Constant(1, 1.0);
    REQUIRE(bagging_votes(e, one).neg == 26);
    REQUIRE(bagging_predict(e, one) == Label::kNeg);

    BaggingEnsemble all_pos;
    all_pos.components.assign(50, make_lda({1.0}, 0.0));
    REQUIRE(bagging_predict(all_pos, one) == Label::kPos);

    // 25/25 tie: the -1 voters score -2, the +1 voters score +1, so the mean is negative.
    BaggingEnsemble tie;
    for (int i = 0; i < 25; ++i) tie.components.push_back(make_lda({-2.0}, 0.0));
    for (int i = 0; i < 25; ++i) tie.components.push_back(make_lda({1.0}, 0.0));
    const VoteTally t = bagging_votes(tie, one);
    REQUIRE(t.neg == 25);
    REQUIRE(t.pos == 25);
    REQUIRE_THAT(t.mean_score, WithinAbs(-0.5, 1e-15));
    REQUIRE(bagging_predict(tie, one) == Label::kNeg);
    // Flip the magnitudes and the tie goes the other way.
    for (auto& c : tie.components) c.w(0) = c.w(0) < 0 ? -1.0 : 2.0;
    REQUIRE(bagging_predict(tie, one) == Label::kPos);
    // Exactly zero mean goes to +1.
    for (auto& c : tie.components) c.w(0) = c.w(0) < 0 ? -1.0 : 1.0;
    REQUIRE(bagging_predict(tie, one) == Label::kPos);
}

TEST_CASE("degenerate bagging inputs") {
    const std::vector<Label> y(20, Label::kPos);
    try {
        (void)bootstrap_draw(y, 0.5, 1, 0);
        FAIL("expected NumericalError");
    } catch (const NumericalError& e) {
        REQUIRE_THAT(e.what(), Catch::Matchers::ContainsSubstring("100"));
    }
    REQUIRE_THROWS_AS(bootstrap_draw(y, 0.0, 1, 0), InvalidArgument);
    REQUIRE_THROWS_AS(fit_bagging(Eigen::MatrixXd::Zero(20, 1), y, 0), InvalidArgument);
}

TEST_CASE("bagging beats the average component under label noise") {
    const Gaussians train = clusters(100, 5, 8.0, 21);
    std::vector<Label> noisy = train.y;
    std::vector<std::size_t> order(noisy.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), std::mt19937_64(22));
    for (std::size_t i = 0; i < 30; ++i) noisy[order[i]] = noisy[order[i]] == Label::kPos ? Label::kNeg : Label::kPos;

    const Gaussians test = clusters(2000, 5, 8.0, 23);
    const BaggingEnsemble e = fit_bagging(train.x, noisy, 50, 0.5, 1);
    std::vector<Label> pred;
    for (Eigen::Index i = 0; i < test.x.rows(); ++i) pred.push_back(bagging_predict(e, test.x.row(i).transpose()));
    const double ensemble = accuracy(pred, test.y);

    double component_mean = 0.0;
    for (const LdaModel& m : e.components) {
        std::vector<Label> p;
        for (Eigen::Index i = 0; i < test.x.rows(); ++i) p.push_back(lda_predict(m, test.x.row(i).transpose()));
        component_mean += accuracy(p, test.y) / 50.0;
    }
    REQUIRE(ensemble >= component_mean);
}

TEST_CASE("model serialisation round trips") {
    const Gaussians g = clusters(60, 3, 2.0, 30);
    const LdaModel m = fit_lda(g.x, g.y);
    const LdaModel back = parse_lda(serialize(m));
    REQUIRE((back.w - m.w).cwiseAbs().maxCoeff() <= 1e-12);
    REQUIRE_THAT(back.b, WithinAbs(m.b, 1e-12));

    const BaggingEnsemble e = fit_bagging(g.x, g.y, 7, 0.4, 0xDEADBEEFCAFEULL);
    const auto path = std::filesystem::temp_directory_path() / "mibci_test_ensemble.json";
    write_text_file(path, serialize(e));
    const BaggingEnsemble eb = parse_bagging(read_text_file(path));
    REQUIRE(eb.rounds == 7);
    REQUIRE(eb.seed == 0xDEADBEEFCAFEULL);
    REQUIRE(eb.subset_fraction == 0.4);
    REQUIRE(eb.components.size() == 7);
    for (std::size_t i = 0; i < 7; ++i) {
        REQUIRE((eb.components[i].w - e.components[i].w).cwiseAbs().maxCoeff() <= 1e-12);
        REQUIRE_THAT(eb.components[i].b, WithinAbs(e.components[i].b, 1e-12));
    }

    REQUIRE_THROWS_AS(parse_lda("{not json"), IoError);
    REQUIRE_THROWS_AS(parse_lda(serialize(e)), IoError);
    REQUIRE_THROWS_AS(parse_bagging(serialize(m)), IoError);
    REQUIRE_THROWS_AS(read_text_file("/nonexistent/mibci/model.json"), IoError);
}
