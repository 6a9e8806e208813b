//! The solver on random valid scenes of moderate size.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use recolor_core::generate::{random_scene, SceneParams};
use recolor_core::kernel::{apply_sequence, CheckMode, Constraints};
use recolor_core::scene::{solve, Mode};

fn run(mode: Mode, max_vertices: usize, count: usize, seed: u64) {
    run_with(mode, max_vertices, count, seed, 1);
    run_with(mode, max_vertices, count, seed + 100, 0);
}

fn run_with(mode: Mode, max_vertices: usize, count: usize, seed: u64, slack: usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let params = SceneParams { mode, max_vertices, slack, palette: 12 };
    let mut solved = 0;
    let mut attempts = 0;
    while solved < count {
        attempts += 1;
        assert!(attempts < 100 * count, "too few valid scenes drawn");
        let Some(scene) = random_scene(params, &mut rng) else { continue };
        let sol = match solve(&scene, mode) {
            Ok(s) => s,
            Err(e) => panic!("{mode:?} scene {solved}: {e}\n{}", scene.dump()),
        };
        let late = scene.boundary_mask();
        let c = Constraints { lists: Some(&scene.lists[0]), once_only: true, late_set: Some(&late), max_per_vertex: None };
        let mid = apply_sequence(scene.graph.graph(), &scene.start, &sol.witness.phases[0], &c, CheckMode::FromScratch).unwrap();
        let c = Constraints { lists: Some(&scene.lists[1]), ..c };
        apply_sequence(scene.graph.graph(), &mid, &sol.witness.phases[1], &c, CheckMode::FromScratch).unwrap();
        assert_eq!(sol.witness.restrict(&late), scene.boundary_witness);
        solved += 1;
    }
}

#[test]
fn general_scenes_up_to_twenty_vertices() {
    run(Mode::General, 20, 1000, 1);
}

#[test]
fn triangle_free_scenes_up_to_twenty_vertices() {
    run(Mode::TriangleFree, 20, 1000, 2);
}

#[test]
fn general_scenes_up_to_sixty_vertices() {
    run(Mode::General, 60, 60, 3);
}

#[test]
fn triangle_free_scenes_up_to_sixty_vertices() {
    run(Mode::TriangleFree, 60, 60, 4);
}
