use lsys::curves::CatalogId;
use lsys::dsl::{parse, parse_word, Expr, Scope};
use lsys::rewriting::{
    derive_step, Module, ModuleString, ParamValue, PatternModule, Production, Table, TemplateModule,
};
use lsys::Point;
use proptest::prelude::*;

fn word(text: &str) -> ModuleString {
    parse_word(text).unwrap()
}

fn symbol_word() -> impl Strategy<Value = ModuleString> {
    prop::collection::vec((prop::sample::select(vec!["A", "B", "C"]), -5.0..5.0f64), 0..12).prop_map(|ms| {
        ModuleString::linear(
            ms.into_iter()
                .map(|(s, v)| Module::new(s, vec![ParamValue::Scalar(v)]))
                .collect(),
        )
    })
}

proptest! {
    #[test]
    fn unmatched_table_is_identity(s in symbol_word(), circular in prop::bool::ANY) {
        let s = if circular { ModuleString::circular(s.modules) } else { s };
        let table = Table::new("t", vec![
            Production::new("z", vec![PatternModule::new("Z", &["x"])], vec![]),
            Production::new("a2", vec![PatternModule::new("A", &["x", "y"])], vec![]),
        ]).unwrap();
        prop_assert_eq!(derive_step(&s, &table, &Scope::default()).unwrap(), s);
    }

    #[test]
    fn chaikin_commutes_with_rotation(
        pts in prop::collection::vec((-50i32..50, -50i32..50), 3..8),
        r in 0usize..8,
    ) {
        let def = CatalogId::Chaikin.definition(&CatalogId::Chaikin.default_params()).unwrap();
        let table = def.table("p").unwrap();
        let axiom = ModuleString::circular(
            pts.iter().map(|&(x, y)| Module::point("P", Point::new2(x as f64, y as f64).unwrap())).collect(),
        );
        let r = r % axiom.len();
        let a = derive_step(&axiom.rotated(r), table, &def.scope).unwrap();
        // every vertex becomes two
        let b = derive_step(&axiom, table, &def.scope).unwrap().rotated(2 * r);
        prop_assert_eq!(a, b);
    }

    #[test]
    fn derivation_is_deterministic(s in symbol_word()) {
        let def = parse(include_str!("../../../definitions/worked_example.lsys")).unwrap();
        let t = def.table("main").unwrap();
        let a = derive_step(&s, t, &def.scope).unwrap();
        let b = derive_step(&s, t, &def.scope).unwrap();
        prop_assert_eq!(a.to_string(), b.to_string());
    }
}

#[test]
fn contexts_see_the_predecessor_string() {
    // p turns P into Q while c reads a P on its left: c must still match
    let table = Table::new(
        "t",
        vec![
            Production::new(
                "p",
                vec![PatternModule::new("P", &["x"])],
                vec![TemplateModule::new("Q", vec![Expr::name("x")])],
            ),
            Production::new(
                "c",
                vec![PatternModule::new("C", &["y"])],
                vec![TemplateModule::new("D", vec![Expr::name("x") + Expr::name("y")])],
            )
            .with_left(vec![PatternModule::new("P", &["x"])]),
        ],
    )
    .unwrap();
    let out = derive_step(&word("P(1) C(2) C(5)"), &table, &Scope::default()).unwrap();
    assert_eq!(out.to_string(), "Q(1) D(3) C(5)");
}

#[test]
fn pseudo_production_consumes_its_span_once() {
    let def = CatalogId::BezierCubicPseudo
        .definition(&CatalogId::BezierCubicPseudo.default_params())
        .unwrap();
    let out = derive_step(&def.axiom, def.table("p").unwrap(), &def.scope).unwrap();
    let symbols: Vec<&str> = out.iter().map(|m| m.symbol.as_str()).collect();
    assert_eq!(symbols.join(" "), "P E Q E Q E P E Q E Q E P");
    let pts = out.points_of(&["P", "Q"]);
    assert_eq!(pts.len(), 7);
    // axiom (0,0) (1,3) (4,3) (5,0): the halves at t = 1/2
    let want = [
        (0.0, 0.0),
        (0.5, 1.5),
        (1.5, 2.25),
        (2.5, 2.25),
        (3.5, 2.25),
        (4.5, 1.5),
        (5.0, 0.0),
    ];
    for (p, (x, y)) in pts.iter().zip(want) {
        assert_eq!((p.x(), p.y()), (x, y));
    }
}

#[test]
fn erased_neighbours_still_serve_as_context() {
    let def = parse(include_str!("../definitions/decasteljau_point.lsys")).unwrap();
    let out = derive_step(&def.axiom, def.table("p").unwrap(), &def.scope).unwrap();
    assert_eq!(out.to_string(), "P((0.5,1.5)) P((2,3.5)) P((4,3.5)) P((5.5,1.5))");
}
