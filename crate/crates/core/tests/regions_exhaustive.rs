use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use schnyder::drawing::drawing;
use schnyder::exec::Exec;
use schnyder::oracle::{all_realizers, enumerate_realizers, static_coordinates};
use schnyder::random::{random_realizer, random_triangulation};
use schnyder::realizer::{lexicographic_violation, EdgeKind, RegionCounter};
use schnyder::{Color, Realizer, Triangulation, Wood};

fn realizers_up_to(n: usize) -> Vec<Realizer> {
    (4..=n).flat_map(|k| all_realizers(k, Exec::default()).unwrap()).collect()
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| b.binary_search(x).is_ok())
}

#[test]
fn regions_nest_along_paths_and_regions() {
    for r in realizers_up_to(8) {
        let t = r.triangulation();
        let mut counter = RegionCounter::new(&r);
        let sets: Vec<[Vec<usize>; 3]> = (0..r.n()).map(|u| counter.members(u)).collect();
        for u in t.interior_vertices() {
            for c in Color::ALL {
                let inside = &sets[u][c.index()];
                let pred_path = r.path_of(u, c.pred());
                for v in t.interior_vertices().filter(|&v| v != u) {
                    if inside.binary_search(&v).is_ok() || pred_path.contains(&v) {
                        assert!(is_subset(&sets[v][c.index()], inside), "R_{c}({v}) not inside R_{c}({u})");
                    }
                }
            }
        }
    }
}

#[test]
fn triangles_are_tricolored_exactly_when_cyclic() {
    for r in realizers_up_to(8) {
        let t = r.triangulation();
        for (a, b) in t.interior_edges() {
            for &c in t.rotation(a) {
                if c <= b || !t.has_edge(b, c) || t.is_outer_edge(a, c) || t.is_outer_edge(b, c) {
                    continue;
                }
                let color = |x: usize, y: usize| match r.edge_kind(x, y) {
                    Some(EdgeKind::Out(k) | EdgeKind::In(k)) => k,
                    other => panic!("interior edge {x}-{y} has kind {other:?}"),
                };
                let mut colors = [color(a, b), color(b, c), color(c, a)].map(Color::index);
                colors.sort_unstable();
                let tricolored = colors == [0, 1, 2];
                let cyclic = (r.is_directed(a, b) && r.is_directed(b, c) && r.is_directed(c, a))
                    || (r.is_directed(b, a) && r.is_directed(c, b) && r.is_directed(a, c));
                assert_eq!(tricolored, cyclic, "triangle {a} {b} {c}");
            }
        }
    }
}

#[test]
fn coordinates_are_injective_and_lexicographic() {
    for r in realizers_up_to(8) {
        let coords = static_coordinates(&r);
        assert!(coords.iter().all(|c| c.sum() == r.n() - 1));
        let mut sorted = coords.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), r.n());
        assert_eq!(lexicographic_violation(r.triangulation(), &coords), None);
    }
}

fn reduce_and_check(t: &Triangulation) -> usize {
    let steps = t.reduce_to_double_fan();
    let mut s = t.clone();
    for &(u, v) in &steps {
        s.flip_in_place(u, v).unwrap();
    }
    assert!(s.is_double_fan());
    steps.len()
}

#[test]
fn double_fan_reduction_is_linear() {
    let mut rng = StdRng::seed_from_u64(21);
    for n in [4, 5, 10, 50, 200, 600] {
        for _ in 0..5 {
            let t = random_triangulation(n, rng.gen_range(0..4 * n), &mut rng);
            assert!(reduce_and_check(&t) <= 3 * n, "n = {n}");
        }
    }
    for r in realizers_up_to(7) {
        assert!(reduce_and_check(r.triangulation()) <= 3 * r.n());
    }
}

#[test]
fn double_fan_has_one_realizer() {
    for n in 5..=8 {
        assert_eq!(enumerate_realizers(&Triangulation::double_fan(n).unwrap()).len(), 1, "n = {n}");
    }
}

#[test]
fn random_drawings_are_plane() {
    let mut rng = StdRng::seed_from_u64(5);
    for _ in 0..100 {
        let n = rng.gen_range(4..=200);
        let r = random_realizer(n, 2 * n, &mut rng);
        let d = drawing(&r);
        assert!(d.is_injective());
        assert_eq!(d.improper_crossings(), 0, "n = {n}");
    }
}

#[test]
fn linear_and_flooded_coordinates_agree() {
    let mut rng = StdRng::seed_from_u64(6);
    for n in [4, 9, 33, 120] {
        let r = random_realizer(n, 5 * n, &mut rng);
        assert_eq!(r.barycentric_linear(), static_coordinates(&r));
    }
}
