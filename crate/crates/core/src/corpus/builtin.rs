use super::generators::{gen_class1, gen_class2, gen_class2_matrix, gen_class3, gen_class3_matrix, gen_class4};
use super::{Check, Expected, Rule, Scenario};
use crate::bba::{MassFunction, MassMatrix};
use crate::hyperlattice::Element;
use crate::model::ModelSpec;
use crate::rules::TransferPolicy;

fn t(i: usize) -> Element {
    Element::atom(i - 1)
}

fn u(atoms: &[usize]) -> Element {
    Element::union_of(atoms.iter().map(|a| a - 1))
}

fn i(atoms: &[usize]) -> Element {
    Element::intersection_of(atoms.iter().map(|a| a - 1))
}

fn free(n: usize) -> ModelSpec {
    ModelSpec::free(n).expect("valid frame")
}

fn shafer(n: usize) -> ModelSpec {
    ModelSpec::shafer(n).expect("valid frame")
}

fn masses(list: &[(Element, f64)]) -> Expected {
    Expected::Masses(list.to_vec())
}

fn bba(n: usize, list: &[(Element, f64)]) -> MassFunction {
    MassFunction::new(n, list.iter().cloned()).expect("valid bba")
}

fn bayes(rows: Vec<Vec<f64>>) -> Vec<MassFunction> {
    MassMatrix::bayesian(rows).and_then(|m| m.to_sources()).expect("valid matrix")
}

fn new(id: &str, origin: &str, n: usize, sources: Vec<MassFunction>, checks: Vec<Check>) -> Scenario {
    Scenario {
        id: id.to_string(),
        origin: origin.to_string(),
        n,
        atom_names: Vec::new(),
        sources,
        event: None,
        checks,
        note: None,
    }
}

fn renamed(mut s: Scenario, id: &str, origin: &str) -> Scenario {
    s.id = id.to_string();
    s.origin = origin.to_string();
    s
}

/// Checks shared by the total-conflict scenarios: Dempster fails, the
/// conflict degree is exactly 1.
fn total_conflict(n: usize) -> Vec<Check> {
    vec![
        Check::new(Rule::Dempster, shafer(n), Expected::TotalConflict),
        Check::new(Rule::ConflictDegree, shafer(n), Expected::Value(1.0)),
    ]
}

fn class1() -> Vec<Scenario> {
    let mut out = Vec::new();

    let mut checks = total_conflict(2);
    checks.push(Check::new(Rule::DsmClassic, free(2), masses(&[(i(&[1, 2]), 1.0)])));
    checks.push(Check::new(Rule::DsmHybrid, shafer(2), masses(&[(u(&[1, 2]), 1.0)])));
    out.push(new(
        "C1.1",
        "two Bayesian sources certain of different singletons",
        2,
        bayes(vec![vec![1.0, 0.0], vec![0.0, 1.0]]),
        checks,
    ));

    let mut checks = total_conflict(4);
    checks.push(Check::new(
        Rule::DsmClassic,
        free(4),
        masses(&[(i(&[1, 2]), 0.12), (i(&[1, 4]), 0.48), (i(&[2, 3]), 0.08), (i(&[3, 4]), 0.32)]),
    ));
    checks.push(Check::new(
        Rule::DsmHybrid,
        shafer(4),
        masses(&[(u(&[1, 2]), 0.12), (u(&[1, 4]), 0.48), (u(&[2, 3]), 0.08), (u(&[3, 4]), 0.32)]),
    ));
    out.push(new(
        "C1.2",
        "two Bayesian sources on four singletons, every column has a zero",
        4,
        bayes(vec![vec![0.6, 0.0, 0.4, 0.0], vec![0.0, 0.2, 0.0, 0.8]]),
        checks,
    ));

    let mut checks = total_conflict(4);
    checks.push(Check::new(
        Rule::DsmClassic,
        free(4),
        masses(&[
            (i(&[1, 2]), 0.036),
            (i(&[1, 4]), 0.336),
            (i(&[2, 3]), 0.024),
            (i(&[3, 4]), 0.224),
            (i(&[1, 2, 4]), 0.228),
            (i(&[2, 3, 4]), 0.152),
        ]),
    ));
    checks.push(Check::new(
        Rule::DsmHybrid,
        shafer(4),
        masses(&[
            (u(&[1, 2]), 0.036),
            (u(&[1, 4]), 0.336),
            (u(&[2, 3]), 0.024),
            (u(&[3, 4]), 0.224),
            (u(&[1, 2, 4]), 0.228),
            (u(&[2, 3, 4]), 0.152),
        ]),
    ));
    out.push(new(
        "C1.3",
        "three Bayesian sources on four singletons",
        4,
        bayes(vec![
            vec![0.6, 0.0, 0.4, 0.0],
            vec![0.0, 0.2, 0.0, 0.8],
            vec![0.0, 0.3, 0.0, 0.7],
        ]),
        checks,
    ));

    let matrix = MassMatrix::bayesian(vec![
        vec![0.5, 0.0, 0.3, 0.0, 0.2],
        vec![0.0, 0.6, 0.0, 0.4, 0.0],
        vec![0.1, 0.2, 0.3, 0.4, 0.0],
    ])
    .expect("valid matrix");
    out.push(renamed(
        gen_class1(&matrix).expect("class 1 instance"),
        "C1.4",
        "three Bayesian sources on five singletons, generated from the Bayesian total-conflict conditions",
    ));

    let mut checks = total_conflict(4);
    checks.push(Check::new(
        Rule::DsmClassic,
        free(4),
        masses(&[
            (i(&[1, 3]), 0.12),
            (i(&[1, 4]), 0.28),
            (i(&[2, 3]), 0.15),
            (i(&[2, 4]), 0.35),
            (t(3).meet(&u(&[1, 2])), 0.03),
            (t(4).meet(&u(&[1, 2])), 0.07),
        ]),
    ));
    checks.push(Check::new(
        Rule::DsmHybrid,
        shafer(4),
        masses(&[
            (u(&[1, 3]), 0.12),
            (u(&[1, 4]), 0.28),
            (u(&[2, 3]), 0.15),
            (u(&[2, 4]), 0.35),
            (u(&[1, 2, 3]), 0.03),
            (u(&[1, 2, 4]), 0.07),
        ]),
    ));
    out.push(new(
        "C1.5",
        "two general sources, one with mass on t1|t2",
        4,
        vec![
            bba(4, &[(t(1), 0.4), (t(2), 0.5), (u(&[1, 2]), 0.1)]),
            bba(4, &[(t(3), 0.3), (t(4), 0.7)]),
        ],
        checks,
    ));

    let mut checks = total_conflict(4);
    let t12 = u(&[1, 2]);
    let t34 = u(&[3, 4]);
    checks.push(Check::new(
        Rule::DsmClassic,
        free(4),
        masses(&[
            (i(&[1, 3]), 0.144),
            (i(&[1, 4]), 0.288),
            (i(&[2, 3]), 0.030),
            (i(&[2, 4]), 0.060),
            (i(&[1, 2, 3]), 0.120),
            (i(&[1, 2, 4]), 0.240),
            (t12.meet(&t(3)), 0.006),
            (t12.meet(&t(4)), 0.012),
            (t(1).meet(&t34), 0.048),
            (i(&[1, 2]).meet(&t34), 0.040),
            (t(2).meet(&t34), 0.010),
            (t12.meet(&t34), 0.002),
        ]),
    ));
    checks.push(
        Check::new(
            Rule::DsmHybrid,
            shafer(4),
            masses(&[
                (u(&[1, 3]), 0.144),
                (u(&[1, 4]), 0.288),
                (u(&[2, 3]), 0.030),
                (u(&[2, 4]), 0.060),
                (u(&[1, 2, 3]), 0.126),
                (u(&[1, 2, 4]), 0.252),
                (u(&[1, 3, 4]), 0.048),
                (u(&[2, 3, 4]), 0.010),
                (u(&[1, 2, 3, 4]), 0.042),
            ]),
        )
        .with_policy(TransferPolicy::ReducedSwap),
    );
    checks.push(
        Check::new(
            Rule::DsmHybrid,
            shafer(4),
            masses(&[
                (u(&[1, 3]), 0.096),
                (u(&[1, 4]), 0.192),
                (u(&[1, 2, 3]), 0.204),
                (u(&[1, 2, 4]), 0.408),
                (u(&[1, 3, 4]), 0.032),
                (u(&[1, 2, 3, 4]), 0.068),
            ]),
        )
        .with_policy(TransferPolicy::S3Join),
    );
    let mut s = new(
        "C1.6",
        "three general sources with mass on t1|t2 and t3|t4",
        4,
        vec![
            bba(4, &[(t(1), 0.4), (t(2), 0.5), (u(&[1, 2]), 0.1)]),
            bba(4, &[(t(3), 0.3), (t(4), 0.6), (u(&[3, 4]), 0.1)]),
            bba(4, &[(t(1), 0.8), (u(&[1, 2]), 0.2)]),
        ],
        checks,
    );
    s.note = Some(
        "the printed hybrid table swaps every conjunction of the reduced meet into a union; \
         the join policy sends each empty product to the union of its focal elements instead"
            .into(),
    );
    out.push(s);

    let labels = vec![t(1), t(2), t(3), t(4), t(5), u(&[1, 2])];
    let matrix = MassMatrix::new(
        5,
        labels,
        vec![
            vec![0.4, 0.5, 0.0, 0.0, 0.0, 0.1],
            vec![0.0, 0.0, 0.3, 0.6, 0.1, 0.0],
            vec![0.0, 0.2, 0.0, 0.0, 0.8, 0.0],
        ],
    )
    .expect("valid matrix");
    out.push(renamed(
        gen_class1(&matrix).expect("class 1 instance"),
        "C1.7",
        "general sources on five singletons, generated from the general total-conflict conditions",
    ));
    out
}

fn class2() -> Vec<Scenario> {
    let mut out = Vec::new();

    let mut s = new(
        "C2.Z",
        "two doctors: meningitis, contusion or tumor",
        3,
        vec![
            bba(3, &[(t(1), 0.99), (t(3), 0.01)]),
            bba(3, &[(t(2), 0.99), (t(3), 0.01)]),
        ],
        vec![
            Check::new(Rule::Dempster, shafer(3), masses(&[(t(3), 1.0)])),
            Check::new(Rule::ConflictDegree, shafer(3), Expected::Value(0.9999)),
            Check::new(
                Rule::DsmClassic,
                free(3),
                masses(&[(i(&[1, 2]), 0.9801), (i(&[1, 3]), 0.0099), (i(&[2, 3]), 0.0099), (t(3), 0.0001)]),
            ),
            Check::new(
                Rule::DsmHybrid,
                shafer(3),
                masses(&[(u(&[1, 2]), 0.9801), (u(&[1, 3]), 0.0099), (u(&[2, 3]), 0.0099), (t(3), 0.0001)]),
            ),
        ],
    );
    s.atom_names = vec!["M".into(), "C".into(), "T".into()];
    out.push(s);

    let two_eps = |id: &str, origin: &str, e1: f64, e2: f64| {
        new(
            id,
            origin,
            3,
            bayes(vec![vec![1.0 - e1, 0.0, e1], vec![0.0, 1.0 - e2, e2]]),
            vec![
                Check::new(Rule::Dempster, shafer(3), masses(&[(t(3), 1.0)])),
                Check::new(
                    Rule::DsmClassic,
                    free(3),
                    masses(&[
                        (t(3), e1 * e2),
                        (i(&[1, 2]), (1.0 - e1) * (1.0 - e2)),
                        (i(&[1, 3]), (1.0 - e1) * e2),
                        (i(&[2, 3]), (1.0 - e2) * e1),
                    ]),
                ),
                Check::new(
                    Rule::DsmHybrid,
                    shafer(3),
                    masses(&[
                        (t(3), e1 * e2),
                        (u(&[1, 2]), (1.0 - e1) * (1.0 - e2)),
                        (u(&[1, 3]), (1.0 - e1) * e2),
                        (u(&[2, 3]), (1.0 - e2) * e1),
                    ]),
                ),
            ],
        )
    };
    out.push(two_eps("C2.2", "tiny shared singleton on three atoms, eps = (0.01, 0.02)", 0.01, 0.02));
    out.push(two_eps("C2.E", "tiny shared singleton on three atoms, eps = 1/2", 0.5, 0.5));

    let (e1, e2, e3) = (0.1, 0.2, 0.3);
    let mut s = new(
        "C2.3",
        "tiny shared singleton on four atoms, eps = (0.1, 0.2, 0.3)",
        4,
        bayes(vec![vec![1.0 - e1 - e2, 0.0, e1, e2], vec![0.0, 1.0 - e3, 0.0, e3]]),
        vec![
            Check::new(Rule::Dempster, shafer(4), masses(&[(t(4), 1.0)])),
            Check::new(
                Rule::DsmClassic,
                free(4),
                masses(&[
                    (i(&[1, 2]), (1.0 - e1 - e2) * (1.0 - e3)),
                    (i(&[1, 4]), (1.0 - e1 - e2) * e3),
                    (i(&[2, 3]), e1 * (1.0 - e3)),
                    (i(&[3, 4]), e1 * e3),
                    (i(&[2, 4]), e2 * (1.0 - e3)),
                    (t(4), e2 * e3),
                ]),
            ),
            Check::new(
                Rule::DsmHybrid,
                shafer(4),
                masses(&[
                    (u(&[1, 2]), (1.0 - e1 - e2) * (1.0 - e3)),
                    (u(&[1, 4]), (1.0 - e1 - e2) * e3),
                    (u(&[2, 3]), e1 * (1.0 - e3)),
                    (u(&[3, 4]), e1 * e3),
                    (u(&[2, 4]), e2 * (1.0 - e3)),
                    (t(4), e2 * e3),
                ]),
            ),
        ],
    );
    s.note = Some(
        "masses come from the product of the matrix entries: t1&t4 gets (1-e1-e2)e3, \
         and t2&t4 receives e2(1-e3), a term the printed list leaves out"
            .into(),
    );
    out.push(s);

    out.push(renamed(
        gen_class2(5, 3, &[0.01, 0.02, 0.03, 0.04, 0.05]).expect("class 2 instance"),
        "C2.4",
        "staggered two-source layout on six atoms, split after the third epsilon",
    ));

    let matrix = MassMatrix::bayesian(vec![
        vec![0.7, 0.0, 0.2, 0.1],
        vec![0.0, 0.85, 0.1, 0.05],
        vec![0.3, 0.6, 0.0, 0.1],
    ])
    .expect("valid matrix");
    out.push(renamed(
        gen_class2_matrix(&matrix, 3).expect("class 2 instance"),
        "C2.5",
        "three sources, one strictly positive column and a zero in every other one",
    ));
    out
}

fn class3() -> Vec<Scenario> {
    let mut out = Vec::new();
    let t34 = u(&[3, 4]);
    out.push(new(
        "C3.1",
        "two sources with a small mass on the uncertainty t3|t4",
        4,
        vec![
            bba(4, &[(t(1), 0.99), (t34.clone(), 0.01)]),
            bba(4, &[(t(2), 0.98), (t34.clone(), 0.02)]),
        ],
        vec![
            Check::new(Rule::Dempster, shafer(4), masses(&[(t34.clone(), 1.0)])),
            Check::new(
                Rule::DsmClassic,
                free(4),
                masses(&[
                    (i(&[1, 2]), 0.9702),
                    (t(1).meet(&t34), 0.0198),
                    (t(2).meet(&t34), 0.0098),
                    (t34.clone(), 0.0002),
                ]),
            ),
            Check::new(
                Rule::DsmHybrid,
                shafer(4),
                masses(&[
                    (u(&[1, 2]), 0.9702),
                    (u(&[1, 3, 4]), 0.0198),
                    (u(&[2, 3, 4]), 0.0098),
                    (t34, 0.0002),
                ]),
            ),
        ],
    ));

    let t45 = u(&[4, 5]);
    out.push(new(
        "C3.2",
        "three sources with a small mass on the uncertainty t4|t5",
        5,
        vec![
            bba(5, &[(t(1), 0.99), (t45.clone(), 0.01)]),
            bba(5, &[(t(2), 0.98), (t(3), 0.01), (t45.clone(), 0.01)]),
            bba(5, &[(t(1), 0.01), (t(2), 0.01), (t(3), 0.97), (t45.clone(), 0.01)]),
        ],
        vec![
            Check::new(Rule::Dempster, shafer(5), masses(&[(t45.clone(), 1.0)])),
            Check::new(
                Rule::DsmClassic,
                free(5),
                masses(&[
                    (i(&[1, 2]), 0.019404),
                    (i(&[1, 3]), 0.009702),
                    (i(&[1, 2, 3]), 0.941193),
                    (i(&[1, 3]).meet(&t45), 0.009703),
                    (t(1).meet(&t45), 0.000199),
                    (i(&[1, 2]).meet(&t45), 0.009899),
                    (t(2).meet(&t45), 0.000197),
                    (i(&[2, 3]).meet(&t45), 0.009507),
                    (t(3).meet(&t45), 0.000195),
                    (t45.clone(), 0.000001),
                ]),
            ),
            Check::new(
                Rule::DsmHybrid,
                shafer(5),
                masses(&[
                    (u(&[1, 2]), 0.019404),
                    (u(&[1, 3]), 0.009702),
                    (u(&[1, 2, 3]), 0.941193),
                    (u(&[1, 3, 4, 5]), 0.009703),
                    (u(&[1, 4, 5]), 0.000199),
                    (u(&[1, 2, 4, 5]), 0.009899),
                    (u(&[2, 4, 5]), 0.000197),
                    (u(&[2, 3, 4, 5]), 0.009507),
                    (u(&[3, 4, 5]), 0.000195),
                    (t45, 0.000001),
                ]),
            ),
        ],
    ));

    out.push(renamed(
        gen_class3(5, 3, &u(&[2, 4]), &[0.01, 0.02, 0.03]).expect("class 3 instance"),
        "C3.3",
        "three sources, one positive uncertainty column whose atoms carry no mass",
    ));

    let labels = vec![t(1), t(2), t(3), t(4), t(5), t(6), u(&[3, 4]), u(&[5, 6])];
    let matrix = MassMatrix::new(
        6,
        labels,
        vec![
            vec![0.9, 0.0, 0.0, 0.0, 0.0, 0.0, 0.1, 0.0],
            vec![0.0, 0.8, 0.0, 0.0, 0.0, 0.0, 0.05, 0.15],
            vec![0.5, 0.3, 0.0, 0.0, 0.0, 0.0, 0.2, 0.0],
        ],
    )
    .expect("valid matrix");
    out.push(renamed(
        gen_class3_matrix(&matrix, 6).expect("class 3 instance"),
        "C3.4",
        "two disjoint uncertainty columns, only one of them positive in every row",
    ));
    out
}

fn conditioned(id: &str, origin: &str, n: usize, source: MassFunction, event: Element, checks: Vec<Check>) -> Scenario {
    let mut s = new(id, origin, n, vec![source], checks);
    s.event = Some(event);
    s
}

fn class4() -> Vec<Scenario> {
    let mut out = Vec::new();
    let (t45, t56) = (u(&[4, 5]), u(&[5, 6]));
    out.push(conditioned(
        "C4.1",
        "source with no mass on t2 conditioned on t2, six atoms",
        6,
        bba(6, &[(t(1), 0.3), (t(3), 0.4), (t45.clone(), 0.2), (t56.clone(), 0.1)]),
        t(2),
        vec![
            Check::new(Rule::ConditionDempster, shafer(6), Expected::TotalConflict),
            Check::new(
                Rule::ConditionDsm,
                free(6),
                masses(&[
                    (i(&[1, 2]), 0.3),
                    (i(&[2, 3]), 0.4),
                    (t(2).meet(&t45), 0.2),
                    (t(2).meet(&t56), 0.1),
                ]),
            ),
            Check::new(
                Rule::ConditionDsm,
                shafer(6),
                masses(&[
                    (u(&[1, 2]), 0.3),
                    (u(&[2, 3]), 0.4),
                    (u(&[2, 4, 5]), 0.2),
                    (u(&[2, 5, 6]), 0.1),
                ]),
            ),
        ],
    ));

    out.push(renamed(
        gen_class4(6, 0, 1).expect("class 4 instance"),
        "C4.2",
        "source certain of t1 conditioned on t2, six atoms",
    ));
    out.push(renamed(
        gen_class4(4, 2, 0).expect("class 4 instance"),
        "C4.3",
        "source certain of t3 conditioned on t1, generated",
    ));

    out.push(conditioned(
        "C4.4",
        "Bayesian source on t1, t2 conditioned on the ignorance t3|t4",
        4,
        bba(4, &[(t(1), 0.3), (t(2), 0.7)]),
        u(&[3, 4]),
        vec![
            Check::new(Rule::ConditionDempster, shafer(4), Expected::TotalConflict),
            Check::new(
                Rule::ConditionDsm,
                free(4),
                masses(&[(t(1).meet(&u(&[3, 4])), 0.3), (t(2).meet(&u(&[3, 4])), 0.7)]),
            ),
            Check::new(
                Rule::ConditionDsm,
                shafer(4),
                masses(&[(u(&[1, 3, 4]), 0.3), (u(&[2, 3, 4]), 0.7)]),
            ),
        ],
    ));

    out.push(conditioned(
        "C4.5",
        "source with disjoint unions conditioned on a singleton it ignores",
        5,
        bba(5, &[(t(1), 0.2), (t(2), 0.5), (u(&[4, 5]), 0.3)]),
        t(3),
        vec![
            Check::new(Rule::ConditionDempster, shafer(5), Expected::TotalConflict),
            Check::new(
                Rule::ConditionDsm,
                free(5),
                masses(&[(i(&[1, 3]), 0.2), (i(&[2, 3]), 0.5), (t(3).meet(&u(&[4, 5])), 0.3)]),
            ),
            Check::new(
                Rule::ConditionDsm,
                shafer(5),
                masses(&[(u(&[1, 3]), 0.2), (u(&[2, 3]), 0.5), (u(&[3, 4, 5]), 0.3)]),
            ),
        ],
    ));

    let mut s = conditioned(
        "C4.6",
        "paradoxical source on two atoms conditioned on t2",
        2,
        bba(2, &[(t(1), 0.2), (t(2), 0.1), (i(&[1, 2]), 0.4), (u(&[1, 2]), 0.3)]),
        t(2),
        vec![
            Check::new(Rule::ConditionDempster, shafer(2), Expected::ParadoxicalInput),
            Check::new(Rule::ConditionDsm, free(2), masses(&[(i(&[1, 2]), 0.6), (t(2), 0.4)])),
            Check::new(Rule::ConditionDsm, shafer(2), masses(&[(t(2), 0.8), (u(&[1, 2]), 0.2)]))
                .with_policy(TransferPolicy::S3Join),
            Check::new(Rule::ConditionDsm, shafer(2), masses(&[(t(2), 0.4), (u(&[1, 2]), 0.6)]))
                .with_policy(TransferPolicy::ReducedSwap),
        ],
    );
    s.note = Some("the two transfer policies disagree here; the printed values follow the join policy".into());
    out.push(s);
    out
}

/// The reference scenarios, sorted by id.
pub fn builtin_scenarios() -> Vec<Scenario> {
    let mut all: Vec<Scenario> = [class1(), class2(), class3(), class4()].into_iter().flatten().collect();
    all.sort_by(|a, b| a.id.cmp(&b.id));
    all
}
