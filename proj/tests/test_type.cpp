#include <gtest/gtest.h>

#include "tlc/syntax.hpp"
#include "tlc/type.hpp"

using namespace tlc;

TEST(Type, InterningGivesIdentity) {
    Type p = Type::atom("p");
    EXPECT_EQ(Type::arrow(p, p), Type::arrow(Type::atom("p"), p));
    EXPECT_NE(Type::arrow(p, p), Type::product(p, p));
    EXPECT_EQ(Type::atom("T"), Type::terminal());
}

TEST(Type, TowerAndNumerals) {
    Type p = Type::atom("p");
    EXPECT_EQ(Type::tower(0), p);
    EXPECT_EQ(Type::tower(1), Type::arrow(p, p));
    EXPECT_EQ(Type::tower(2), Type::arrow(Type::arrow(p, p), Type::arrow(p, p)));
    EXPECT_EQ(Type::numeral(0), Type::tower(2));
    EXPECT_EQ(Type::numeral(3), Type::tower(5));
    EXPECT_EQ(node_count(Type::tower(30)), 31u);
}

TEST(Type, TreeSizeIsExponentialForTowers) {
    // A_n written out has 2^n atom leaves and 2^n - 1 arrows.
    for (unsigned n = 0; n < 12; ++n) EXPECT_EQ(tree_size(Type::tower(n)), (std::size_t{2} << n) - 1);
    EXPECT_EQ(tree_size(Type::tower(80)), std::numeric_limits<std::size_t>::max());
}

TEST(Type, PrintingRoundTrips) {
    for (const char* s : {"p", "p->p", "(p->p)->p", "p*q->r", "p*(q*r)", "(p->q)*r", "T->p*T",
                          "p*q*r", "((p->p)->p->p)->(p->p)->p->p"}) {
        Type t = parse_type(s);
        EXPECT_EQ(t.to_string(), s);
        EXPECT_EQ(parse_type(t.to_string()), t);
    }
}

TEST(Type, SubstituteAndAtoms) {
    Type t = parse_type("p->q*p");
    Type r = substitute(t, {{"p", parse_type("a->b")}});
    EXPECT_EQ(r, parse_type("(a->b)->q*(a->b)"));
    EXPECT_EQ(atoms(t), (std::set<std::string>{"p", "q"}));
    EXPECT_EQ(substitute_all_atoms(t, Type::atom("s")), parse_type("s->s*s"));
    EXPECT_TRUE(is_product_free(parse_type("(p->q)->p")));
    EXPECT_FALSE(is_product_free(parse_type("p->T")));
}

TEST(Type, ArrowSpine) {
    auto s = arrow_spine(parse_type("(p->q)->q*p->p"));
    ASSERT_EQ(s.args.size(), 2u);
    EXPECT_EQ(s.args[0], parse_type("p->q"));
    EXPECT_EQ(s.result, Type::atom("p"));
    EXPECT_EQ(arrows(s.args, s.result), parse_type("(p->q)->q*p->p"));
}

TEST(Type, TableRendersLargeTypesByReference) {
    TypeTable table(8);
    Type big = Type::numeral(20);
    std::string r = table.render(big);
    EXPECT_EQ(r[0], '#');
    EXPECT_LT(table.entries().size(), 30u);
    auto resolved = TypeTable::resolve(table.entries());
    EXPECT_EQ(parse_type(r, &resolved), big);
    EXPECT_EQ(table.render(Type::atom("p")), "p");
}
