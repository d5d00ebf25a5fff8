#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <random>
#include <vector>

#include "gradeswap/order_book.hpp"
#include "oracles.hpp"

using namespace gradeswap;

namespace {

Order make_bid(const std::string& student, const std::string& course, LetterGrade current,
               LetterGrade min_acceptable, double max_fee, double notional) {
    Order o;
    o.side = Side::Bid;
    o.student = student;
    o.course = course;
    o.current_grade = current;
    o.min_acceptable_grade = min_acceptable;
    o.max_fee = max_fee;
    o.notional = notional;
    return o;
}

Order make_ask(const std::string& student, const std::string& course, LetterGrade current,
               double min_fee) {
    Order o;
    o.side = Side::Ask;
    o.student = student;
    o.course = course;
    o.current_grade = current;
    o.min_fee = min_fee;
    return o;
}

struct Market {
    Gradebook gradebook;
    LicenseSet licenses;
};

Market two_student_market() {
    Market m;
    m.gradebook.set("ana", "eco", LetterGrade::C);
    m.gradebook.set("dana", "eco", LetterGrade::A);
    REQUIRE(m.licenses.issue("ana", Role::Buyer, "need:ana", 0.0).ok());
    REQUIRE(m.licenses.issue("dana", Role::Seller, "grade:dana", 0.0).ok());
    return m;
}

}  // namespace

TEST_CASE("submission demands a license, an honest grade and a capped fee") {
    auto m = two_student_market();
    OrderBook book;

    auto bid = book.submit(make_bid("ana", "eco", LetterGrade::C, LetterGrade::B, 50.0, 10000.0),
                           m.licenses, m.gradebook);
    REQUIRE(bid.ok());
    CHECK(bid.value().id == 1);
    CHECK(bid.value().submitted_at == 0);
    auto ask = book.submit(make_ask("dana", "eco", LetterGrade::A, 10.0), m.licenses, m.gradebook);
    REQUIRE(ask.ok());
    CHECK(ask.value().id == 2);
    CHECK(ask.value().submitted_at == 1);
    CHECK(book.open_orders() == 2);

    CHECK(book.submit(make_bid("dana", "eco", LetterGrade::A, LetterGrade::A, 10.0, 1000.0),
                      m.licenses, m.gradebook)
              .refusal() == Refusal::UnlicensedBuyer);
    CHECK(book.submit(make_ask("ana", "eco", LetterGrade::C, 10.0), m.licenses, m.gradebook)
              .refusal() == Refusal::UnlicensedSeller);

    // Attestation must match the registrar's record.
    CHECK(book.submit(make_bid("ana", "eco", LetterGrade::B, LetterGrade::A, 50.0, 10000.0),
                      m.licenses, m.gradebook)
              .refusal() == Refusal::UnknownGrade);
    CHECK(book.submit(make_ask("dana", "fin", LetterGrade::A, 10.0), m.licenses, m.gradebook)
              .refusal() == Refusal::UnknownGrade);

    // The cap is strict and the notional must be positive.
    CHECK(book.submit(make_bid("ana", "eco", LetterGrade::C, LetterGrade::B, 100.0, 10000.0),
                      m.licenses, m.gradebook)
              .refusal() == Refusal::FeeCap);
    CHECK(book.submit(make_bid("ana", "eco", LetterGrade::C, LetterGrade::B, -1.0, 10000.0),
                      m.licenses, m.gradebook)
              .refusal() == Refusal::FeeCap);
    CHECK(book.submit(make_bid("ana", "eco", LetterGrade::C, LetterGrade::B, 10.0, 0.0),
                      m.licenses, m.gradebook)
              .refusal() == Refusal::FeeCap);
    CHECK(book.submit(make_ask("dana", "eco", LetterGrade::A, -0.01), m.licenses, m.gradebook)
              .refusal() == Refusal::FeeCap);
    CHECK(book.submit(make_bid("ana", "eco", LetterGrade::C, LetterGrade::B, 99.99, 10000.0),
                      m.licenses, m.gradebook)
              .ok());
    CHECK(book.open_orders() == 3);
}

TEST_CASE("a crossing pair strikes the midpoint fee, rounded down to the cent") {
    auto m = two_student_market();
    OrderBook book(FeePolicy::Midpoint);
    auto bid = book.submit(make_bid("ana", "eco", LetterGrade::C, LetterGrade::B, 80.0, 10000.0),
                           m.licenses, m.gradebook);
    auto ask = book.submit(make_ask("dana", "eco", LetterGrade::A, 40.0), m.licenses, m.gradebook);

    auto proposals = book.match();
    REQUIRE(proposals.size() == 1);
    CHECK(proposals[0].bid_id == bid.value().id);
    CHECK(proposals[0].ask_id == ask.value().id);
    CHECK(proposals[0].buyer == "ana");
    CHECK(proposals[0].seller == "dana");
    CHECK(proposals[0].course == "eco");
    CHECK(proposals[0].fee == 60.0);
    CHECK(book.open_orders() == 0);
    CHECK(book.match().empty());
}

TEST_CASE("fee striking edge cases") {
    auto m = two_student_market();

    SECTION("a fractional midpoint is floored") {
        OrderBook book(FeePolicy::Midpoint);
        book.submit(make_bid("ana", "eco", LetterGrade::C, LetterGrade::B, 0.05, 10000.0),
                    m.licenses, m.gradebook);
        book.submit(make_ask("dana", "eco", LetterGrade::A, 0.02), m.licenses, m.gradebook);
        auto proposals = book.match();
        REQUIRE(proposals.size() == 1);
        CHECK(proposals[0].fee == 0.03);  // midpoint 0.035 floors to the cent
    }

    SECTION("flooring never undercuts the ask") {
        OrderBook book(FeePolicy::Midpoint);
        book.submit(make_bid("ana", "eco", LetterGrade::C, LetterGrade::B, 10.0, 10000.0),
                    m.licenses, m.gradebook);
        book.submit(make_ask("dana", "eco", LetterGrade::A, 10.0), m.licenses, m.gradebook);
        auto proposals = book.match();
        REQUIRE(proposals.size() == 1);
        CHECK(proposals[0].fee == 10.0);
    }

    SECTION("at-ask takes the seller's limit") {
        OrderBook book(FeePolicy::AtAsk);
        book.submit(make_bid("ana", "eco", LetterGrade::C, LetterGrade::B, 80.0, 10000.0),
                    m.licenses, m.gradebook);
        book.submit(make_ask("dana", "eco", LetterGrade::A, 40.0), m.licenses, m.gradebook);
        auto proposals = book.match();
        REQUIRE(proposals.size() == 1);
        CHECK(proposals[0].fee == 40.0);
    }
}

TEST_CASE("price first, then time") {
    Market m;
    m.gradebook.set("ana", "eco", LetterGrade::C);
    m.gradebook.set("boris", "eco", LetterGrade::C);
    m.gradebook.set("dana", "eco", LetterGrade::A);
    m.gradebook.set("elif", "eco", LetterGrade::A);
    for (const auto* s : {"ana", "boris"})
        REQUIRE(m.licenses.issue(s, Role::Buyer, "need", 0.0).ok());
    for (const auto* s : {"dana", "elif"})
        REQUIRE(m.licenses.issue(s, Role::Seller, "grade", 0.0).ok());

    SECTION("the more generous bid goes first") {
        OrderBook book;
        book.submit(make_bid("ana", "eco", LetterGrade::C, LetterGrade::B, 50.0, 10000.0),
                    m.licenses, m.gradebook);
        book.submit(make_bid("boris", "eco", LetterGrade::C, LetterGrade::B, 80.0, 10000.0),
                    m.licenses, m.gradebook);
        book.submit(make_ask("dana", "eco", LetterGrade::A, 10.0), m.licenses, m.gradebook);
        auto proposals = book.match();
        REQUIRE(proposals.size() == 1);
        CHECK(proposals[0].buyer == "boris");
        CHECK(book.open_orders() == 1);  // ana rests
    }

    SECTION("equal limits fall back to arrival order") {
        OrderBook book;
        book.submit(make_bid("ana", "eco", LetterGrade::C, LetterGrade::B, 50.0, 10000.0),
                    m.licenses, m.gradebook);
        book.submit(make_bid("boris", "eco", LetterGrade::C, LetterGrade::B, 50.0, 10000.0),
                    m.licenses, m.gradebook);
        book.submit(make_ask("dana", "eco", LetterGrade::A, 10.0), m.licenses, m.gradebook);
        auto proposals = book.match();
        REQUIRE(proposals.size() == 1);
        CHECK(proposals[0].buyer == "ana");
    }

    SECTION("the cheaper ask wins, then the earlier one") {
        OrderBook book;
        book.submit(make_bid("ana", "eco", LetterGrade::C, LetterGrade::B, 50.0, 10000.0),
                    m.licenses, m.gradebook);
        auto late_cheap = book.submit(make_ask("dana", "eco", LetterGrade::A, 5.0), m.licenses,
                                      m.gradebook);
        book.submit(make_ask("elif", "eco", LetterGrade::A, 20.0), m.licenses, m.gradebook);
        auto proposals = book.match();
        REQUIRE(proposals.size() == 1);
        CHECK(proposals[0].ask_id == late_cheap.value().id);

        OrderBook tied;
        tied.submit(make_bid("ana", "eco", LetterGrade::C, LetterGrade::B, 50.0, 10000.0),
                    m.licenses, m.gradebook);
        auto first = tied.submit(make_ask("dana", "eco", LetterGrade::A, 5.0), m.licenses,
                                 m.gradebook);
        tied.submit(make_ask("elif", "eco", LetterGrade::A, 5.0), m.licenses, m.gradebook);
        auto tied_proposals = tied.match();
        REQUIRE(tied_proposals.size() == 1);
        CHECK(tied_proposals[0].ask_id == first.value().id);
    }
}

TEST_CASE("compatibility is strict about grades, courses and limits") {
    Market m;
    m.gradebook.set("ana", "eco", LetterGrade::B);
    m.gradebook.set("dana", "eco", LetterGrade::B);
    m.gradebook.set("elif", "eco", LetterGrade::BPlus);
    m.gradebook.set("dana", "fin", LetterGrade::A);
    REQUIRE(m.licenses.issue("ana", Role::Buyer, "need", 0.0).ok());
    REQUIRE(m.licenses.issue("dana", Role::Seller, "grade", 0.0).ok());
    REQUIRE(m.licenses.issue("elif", Role::Seller, "grade", 0.0).ok());
    REQUIRE(m.licenses.issue("dana", Role::Buyer, "need", 0.0).ok());

    OrderBook book;
    book.submit(make_bid("ana", "eco", LetterGrade::B, LetterGrade::A, 50.0, 10000.0), m.licenses,
                m.gradebook);
    // Equal grade: not an upgrade.
    book.submit(make_ask("dana", "eco", LetterGrade::B, 5.0), m.licenses, m.gradebook);
    // Better, but under the bid's minimum acceptable grade.
    book.submit(make_ask("elif", "eco", LetterGrade::BPlus, 5.0), m.licenses, m.gradebook);
    // Right grade, wrong course.
    book.submit(make_ask("dana", "fin", LetterGrade::A, 5.0), m.licenses, m.gradebook);
    CHECK(book.match().empty());
    CHECK(book.open_orders() == 4);

    // Limits that do not cross leave both sides resting.
    OrderBook pricey;
    pricey.submit(make_bid("dana", "fin", LetterGrade::A, LetterGrade::APlus, 5.0, 10000.0),
                  m.licenses, m.gradebook);
    CHECK(pricey.match().empty());
}

TEST_CASE("cancel removes resting orders only") {
    auto m = two_student_market();
    OrderBook book;
    auto bid = book.submit(make_bid("ana", "eco", LetterGrade::C, LetterGrade::B, 80.0, 10000.0),
                           m.licenses, m.gradebook);
    auto ask = book.submit(make_ask("dana", "eco", LetterGrade::A, 40.0), m.licenses, m.gradebook);

    REQUIRE(book.cancel(bid.value().id).ok());
    CHECK(book.open_orders() == 1);
    CHECK(book.cancel(bid.value().id).refusal() == Refusal::UnknownOrder);
    CHECK(book.cancel(999).refusal() == Refusal::UnknownOrder);
    // The resting ask now has nothing to cross with.
    CHECK(book.match().empty());

    auto bid2 = book.submit(make_bid("ana", "eco", LetterGrade::C, LetterGrade::B, 80.0, 10000.0),
                            m.licenses, m.gradebook);
    REQUIRE(book.match().size() == 1);
    // Matched orders have left the book; cancelling them is refused.
    CHECK(book.cancel(bid2.value().id).refusal() == Refusal::UnknownOrder);
    CHECK(book.cancel(ask.value().id).refusal() == Refusal::UnknownOrder);
}

TEST_CASE("snapshots are complete and stable") {
    auto m = two_student_market();
    REQUIRE(m.licenses.issue("dana", Role::Buyer, "need", 0.0).ok());
    m.gradebook.set("dana", "fin", LetterGrade::B);

    OrderBook book;
    book.submit(make_bid("ana", "eco", LetterGrade::C, LetterGrade::B, 50.0, 10000.0), m.licenses,
                m.gradebook);
    book.submit(make_bid("dana", "fin", LetterGrade::B, LetterGrade::A, 80.0, 9000.0), m.licenses,
                m.gradebook);
    book.submit(make_ask("dana", "eco", LetterGrade::A, 10.0), m.licenses, m.gradebook);

    const json snap = book.snapshot();
    CHECK(snap.dump() == book.snapshot().dump());
    REQUIRE(snap.at("bids").size() == 2);
    REQUIRE(snap.at("asks").size() == 1);
    // Priority order: the more generous bid leads regardless of arrival.
    CHECK(snap.at("bids")[0].at("student") == "dana");
    CHECK(snap.at("bids")[0].at("max_fee") == 80.0);
    CHECK(snap.at("bids")[0].at("min_acceptable_grade") == "A");
    CHECK_FALSE(snap.at("bids")[0].contains("min_fee"));
    CHECK(snap.at("asks")[0].at("min_fee") == 10.0);
    CHECK_FALSE(snap.at("asks")[0].contains("max_fee"));
}

TEST_CASE("random books agree with the brute-force matcher") {
    const std::vector<std::string> students{"s0", "s1", "s2", "s3", "s4", "s5"};
    const std::vector<std::string> courses{"eco", "fin"};

    for (unsigned seed = 0; seed < 200; ++seed) {
        std::mt19937 gen(seed);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        std::uniform_int_distribution<int> pick_grade(0, 10), pick_student(0, 5), pick_course(0, 1),
            pick_count(2, 14);

        Gradebook gradebook;
        LicenseSet licenses;
        for (const auto& s : students) {
            for (const auto& c : courses)
                gradebook.set(s, c, grade_ladder[static_cast<std::size_t>(pick_grade(gen))]);
            REQUIRE(licenses.issue(s, Role::Buyer, "need", 0.0).ok());
            REQUIRE(licenses.issue(s, Role::Seller, "grade", 0.0).ok());
        }

        const FeePolicy policy = seed % 2 == 0 ? FeePolicy::Midpoint : FeePolicy::AtAsk;
        OrderBook book(policy);
        OrderBook twin(policy);
        std::vector<Order> bids, asks;
        std::map<std::uint64_t, Order> by_id;

        const int order_count = pick_count(gen);
        for (int i = 0; i < order_count; ++i) {
            const auto& student = students[static_cast<std::size_t>(pick_student(gen))];
            const auto& course = courses[static_cast<std::size_t>(pick_course(gen))];
            const LetterGrade held = *gradebook.find(student, course);
            Order order;
            if (unit(gen) < 0.5) {
                const double notional = 1000.0 + 19000.0 * unit(gen);
                order = make_bid(student, course, held,
                                 grade_ladder[static_cast<std::size_t>(pick_grade(gen))],
                                 unit(gen) * (fee_cap(notional) - 0.005), notional);
            } else {
                order = make_ask(student, course, held, unit(gen) * 120.0);
            }
            auto placed = book.submit(order, licenses, gradebook);
            REQUIRE(placed.ok());
            REQUIRE(twin.submit(order, licenses, gradebook).ok());
            (placed.value().side == Side::Bid ? bids : asks).push_back(placed.value());
            by_id.emplace(placed.value().id, placed.value());
        }

        const auto proposals = book.match();
        CHECK(proposals == oracles::naive_match(bids, asks, policy));
        CHECK(proposals == twin.match());
        CHECK(book.open_orders() == by_id.size() - 2 * proposals.size());

        for (const auto& p : proposals) {
            const Order& bid = by_id.at(p.bid_id);
            const Order& ask = by_id.at(p.ask_id);
            CHECK(bid.course == ask.course);
            CHECK(p.course == bid.course);
            CHECK(rank(ask.current_grade) > rank(bid.current_grade));
            CHECK(rank(ask.current_grade) >= rank(bid.min_acceptable_grade));
            CHECK(p.fee >= ask.min_fee);
            CHECK(p.fee <= bid.max_fee);
            CHECK(fee_within_cap(p.fee, bid.notional));
        }
    }
}
