use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use schnyder::dynrealizer::DynRealizer;
use schnyder::exec::Exec;
use schnyder::flips::{all_colored_flips, colored_flip, replay};
use schnyder::oracle::{all_realizers, static_coordinates};
use schnyder::random::{random_flip_site, random_realizer};
use schnyder::realizer::Wood;
use schnyder::Color;

fn assert_matches_static(d: &mut DynRealizer) {
    let s = d.snapshot();
    s.validate().unwrap();
    let want = static_coordinates(&s);
    for (u, w) in want.iter().enumerate() {
        assert_eq!(d.coordinates(u), *w, "vertex {u}");
    }
    for u in s.triangulation().interior_vertices() {
        for c in Color::ALL {
            assert_eq!(d.depth(c, u) as usize + 1, s.path_of(u, c).len());
        }
    }
}

#[test]
fn every_single_flip_up_to_six_vertices() {
    for n in 4..=6 {
        for r in all_realizers(n, Exec::default()).unwrap() {
            for op in all_colored_flips(&r) {
                let mut d = DynRealizer::build(&r).unwrap();
                d.apply(&op).unwrap();
                assert_eq!(d.snapshot(), colored_flip(&r, &op).unwrap());
                assert_matches_static(&mut d);
                d.apply(&op.inverse()).unwrap();
                assert_eq!(d.snapshot(), r);
                assert_matches_static(&mut d);
            }
        }
    }
}

#[test]
fn random_sequences_match_replay() {
    let mut rng = StdRng::seed_from_u64(7);
    for n in [8, 25, 60] {
        let r = random_realizer(n, 2 * n, &mut rng);
        let mut d = DynRealizer::build(&r).unwrap();
        let mut ops = Vec::new();
        for _ in 0..300 {
            let Some(op) = random_flip_site(&d, &mut rng, 64) else { continue };
            d.apply(&op).unwrap();
            ops.push(op);
            assert_matches_static(&mut d);
        }
        assert_eq!(d.snapshot(), replay(&r, &ops).unwrap());
        for op in ops.iter().rev() {
            d.apply(&op.inverse()).unwrap();
        }
        assert_eq!(d.snapshot(), r);
        assert_matches_static(&mut d);
    }
}

#[test]
fn least_common_agrees_with_paths() {
    let mut rng = StdRng::seed_from_u64(8);
    let r = random_realizer(40, 100, &mut rng);
    let mut d = DynRealizer::build(&r).unwrap();
    for _ in 0..200 {
        if let Some(op) = random_flip_site(&d, &mut rng, 64) {
            d.apply(&op).unwrap();
        }
        let s = d.snapshot();
        let (u, v) = (rng.gen_range(0..40), rng.gen_range(0..40));
        for c in Color::ALL {
            let pu = s.path_of(u, c);
            let pv = s.path_of(v, c);
            let root = s.triangulation().root(c.index());
            let want = if pu.last() == Some(&root) && pv.last() == Some(&root) { pu.iter().copied().find(|x| pv.contains(x)) } else { None };
            assert_eq!(d.least_common(c, u, v), want);
        }
    }
}

#[test]
fn labels_follow_snapshot() {
    let mut rng = StdRng::seed_from_u64(9);
    let r = random_realizer(30, 60, &mut rng);
    let d = DynRealizer::build(&r).unwrap();
    for (a, b) in r.triangulation().interior_edges() {
        assert_eq!(d.label(a, b).unwrap(), r.label(a, b).unwrap());
        let (x, y) = d.orientation(a, b).unwrap();
        assert!(r.is_directed(x, y));
    }
}
