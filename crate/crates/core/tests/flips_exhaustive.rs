use schnyder::exec::Exec;
use schnyder::flips::*;
use schnyder::oracle::{all_realizers, count_3_orientations, directed_cycles, enumerate_colorings, enumerate_realizers, enumerate_triangulations};
use schnyder::realizer::Wood;
use schnyder::Realizer;

fn realizers_up_to(n: usize) -> Vec<Realizer> {
    (4..=n).flat_map(|k| all_realizers(k, Exec::default()).unwrap()).collect()
}

#[test]
fn support_and_flippable_diagonal_always_give_a_realizer() {
    for r in realizers_up_to(7) {
        let t = r.triangulation();
        for u in t.interior_vertices() {
            for c in schnyder::Color::ALL {
                let v = r.parent_of(u, c).unwrap();
                for op in candidate_ops(&r, u, v).unwrap() {
                    assert!(check_op(&r, &op).is_ok(), "{op:?}");
                    let s = colored_flip(&r, &op).unwrap();
                    assert_eq!(colored_flip(&s, &op.inverse()).unwrap(), r);
                }
            }
        }
    }
}

#[test]
fn bijection_with_orientations_and_direct_colorings() {
    for n in 4..=7 {
        for t in enumerate_triangulations(n, Exec::default()).unwrap() {
            let rs = enumerate_realizers(&t);
            assert_eq!(rs.len(), count_3_orientations(&t));
            if n <= 6 {
                assert_eq!(rs, enumerate_colorings(&t));
            }
            for r in &rs {
                assert_eq!(&r.to_3_orientation().to_realizer().unwrap(), r);
            }
        }
    }
}

#[test]
fn every_directed_face_is_two_colored_flips() {
    let mut faces = 0;
    for r in realizers_up_to(7) {
        for cyc in directed_cycles(&r).into_iter().filter(|c| c.len() == 3) {
            let c = DirectedCycle::new(&r, cyc).unwrap();
            if c.interior_faces() != 1 {
                continue;
            }
            faces += 1;
            let ops = face_flip_as_colored(&r, &c).unwrap();
            let want = if c.is_ccw() { FlipKind::F1 } else { FlipKind::F2 };
            assert!(ops.iter().all(|op| op.kind == want));
            assert_eq!(replay(&r, &ops).unwrap(), cycle_flip(&r, &c).unwrap());
        }
    }
    assert!(faces > 0);
}

#[test]
fn every_directed_cycle_is_2m_colored_flips() {
    let mut count = 0;
    for r in realizers_up_to(7) {
        for cyc in directed_cycles(&r) {
            let c = DirectedCycle::new(&r, cyc).unwrap();
            let flipped = cycle_flip(&r, &c).unwrap();
            assert_eq!(cycle_flip(&flipped, &c.reversed()).unwrap(), r);
            let ops = cycle_flip_as_colored(&r, &c).unwrap_or_else(|e| panic!("{e} for {:?} in\n{r}", c.vertices()));
            assert_eq!(ops.len(), 2 * c.interior_faces());
            assert_eq!(replay(&r, &ops).unwrap(), flipped);
            count += 1;
        }
    }
    assert!(count > 0);
}

#[test]
fn escape_cycles_exist_and_work() {
    let mut sites = 0;
    for r in realizers_up_to(7) {
        let t = r.triangulation().clone();
        for (a, b) in t.interior_edges() {
            if !t.is_diagonal_flippable(a, b).unwrap() {
                continue;
            }
            let (u, v) = if r.is_directed(a, b) { (a, b) } else { (b, a) };
            if !is_colored_flippable(&r, u, v).unwrap().is_empty() {
                continue;
            }
            sites += 1;
            for strategy in [EscapeStrategy::Paths, EscapeStrategy::Search] {
                let c = find_escape_cycle_with(&r, u, v, strategy).unwrap_or_else(|e| panic!("{e} {strategy:?}\n{r}"));
                let q = t.quad_of(u, v).unwrap();
                assert!(c.contains_edge(u, q.w) || c.contains_edge(u, q.z));
                assert!(!c.contains_edge(u, v));
                let s = cycle_flip(&r, &c).unwrap();
                assert!(!is_colored_flippable(&s, u, v).unwrap().is_empty());
            }
            let (s, c) = make_colored_flippable(&r, a, b).unwrap();
            assert!(c.is_some());
            assert!(!is_colored_flippable(&s, u, v).unwrap().is_empty());
        }
    }
    assert!(sites > 0);
}
