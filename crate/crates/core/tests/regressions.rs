use netsum_core::oracle::{equivalent, interface_nfa, project_determinize, DEFAULT_STATE_BOUND};
use netsum_core::summary::{fold, interface_projection};
use netsum_core::{unfold, EventStatus, Limits, LtsBuilder, Prefix, Product, Strategy};

/// A silent f-d loop in A3 returns to its starting state while the
/// interface is waiting between `a` and `b`/`e`.
fn fig5() -> Product {
    let a1 = LtsBuilder::new("A1")
        .transition("q0", "i", "q1")
        .transition("q1", "a", "q2")
        .transition("q2", "b", "q2")
        .transition("q2", "e", "q3")
        .build()
        .unwrap();
    let a2 = LtsBuilder::new("A2")
        .transition("r0", "i", "r1")
        .transition("r1", "a", "r1")
        .transition("r1", "f", "r1")
        .build()
        .unwrap();
    let a3 = LtsBuilder::new("A3")
        .transition("s0", "i", "s1")
        .transition("s1", "f", "s2")
        .transition("s2", "d", "s1")
        .transition("s2", "b", "s2")
        .transition("s1", "e", "s1")
        .build()
        .unwrap();
    Product::new(vec![a1, a2, a3], 0, false).unwrap()
}

fn summary_matches(product: &Product, prefix: &Prefix) -> bool {
    let summary = fold(product, prefix, &interface_projection(prefix));
    let (_, sys) = interface_nfa(product, DEFAULT_STATE_BOUND).unwrap();
    let (_, sum) = interface_nfa(&summary.to_product("s").unwrap(), DEFAULT_STATE_BOUND).unwrap();
    equivalent(&project_determinize(&sum), &project_determinize(&sys)).is_ok()
}

/// Shrunk random system. After `b` and a silent `e`, P3's second silent
/// `a` repeats the state of the initial `a` and is frozen; the interface
/// `d` concurrent with it (and in conflict with the initial `a`) frees it.
fn frozen_silent() -> Product {
    let p0 = LtsBuilder::new("P0").transition("s0", "b", "s1").transition("s1", "d", "s1").build().unwrap();
    let p1 = LtsBuilder::new("P1")
        .transition("s0", "d", "s1")
        .transition("s1", "e", "s0")
        .transition("s0", "e", "s0")
        .build()
        .unwrap();
    let p3 = LtsBuilder::new("P3")
        .transition("s0", "a", "s1")
        .transition("s0", "b", "s1")
        .transition("s1", "e", "s0")
        .build()
        .unwrap();
    Product::new(vec![p0, p1, p3], 0, false).unwrap()
}

fn action<'a>(product: &'a Product, prefix: &Prefix, e: u32) -> &'a str {
    product.action_name(prefix.event(e).gt.action)
}

#[test]
fn full_frees_what_def2_freezes() {
    let p = frozen_silent();
    let full = unfold(&p, Strategy::Full, Limits::default()).unwrap();
    let def2 = unfold(&p, Strategy::Def2, Limits::default()).unwrap();
    assert_eq!(full.num_freed(), 1);
    assert_eq!(def2.num_freed(), 0);
    assert!(summary_matches(&p, &full));
    assert!(!summary_matches(&p, &def2));
    let freed = (0..full.events().len() as u32).find(|&e| full.event(e).status == EventStatus::Freed).unwrap();
    assert_eq!(action(&p, &full, freed), "a");
    // the freed event has successors, which def2 never builds
    let successors =
        |prefix: &Prefix, e: u32| prefix.event(e).outputs.iter().any(|&b| !prefix.condition(b).consumers.is_empty());
    assert!(successors(&full, freed));
    assert!(def2.final_candidates().all(|e| !successors(&def2, e)));
}

#[test]
fn fig5_needs_the_full_strategy() {
    let p = fig5();
    assert!(summary_matches(&p, &unfold(&p, Strategy::Full, Limits::default()).unwrap()));
    assert!(!summary_matches(&p, &unfold(&p, Strategy::Def2, Limits::default()).unwrap()));
}

#[test]
fn def2_freezes_the_loop_closing_event_forever() {
    let p = fig5();
    let def2 = unfold(&p, Strategy::Def2, Limits::default()).unwrap();
    let frozen: Vec<u32> = def2.final_candidates().collect();
    assert!(frozen.iter().any(|&e| action(&p, &def2, e) == "d"));
    for e in frozen {
        let EventStatus::Candidate { blocks } = &def2.event(e).status else { unreachable!() };
        assert_eq!(blocks.len(), 1);
    }
}

/// `u` in X, then `v` synchronising Y and Z, then `w` synchronising X and
/// Z. `u < w`, but X's condition leaving the cut does not precede Y's
/// condition entering it, so `u` is not a strong cause of `w`.
#[test]
fn causally_unrelated_cut_change_breaks_strong_cause() {
    let i = LtsBuilder::new("I").state("p").build().unwrap();
    let x = LtsBuilder::new("X").transition("x0", "u", "x1").transition("x1", "w", "x2").build().unwrap();
    let y = LtsBuilder::new("Y").transition("y0", "v", "y1").build().unwrap();
    let z = LtsBuilder::new("Z").transition("z0", "v", "z1").transition("z1", "w", "z2").build().unwrap();
    let p = Product::new(vec![i, x, y, z], 0, false).unwrap();
    let prefix = unfold(&p, Strategy::Full, Limits::default()).unwrap();
    let find = |a: &str| (0..prefix.events().len() as u32).find(|&e| action(&p, &prefix, e) == a).unwrap();
    let (u, v, w) = (find("u"), find("v"), find("w"));
    assert!(prefix.local_configuration(w).contains(u as usize));
    assert!(!prefix.strong_cause(u, w));
    assert!(prefix.strong_cause(v, w));
}
