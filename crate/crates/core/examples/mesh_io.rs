// Builds the L-shape mesh, prints its metrics, writes it in the text format
// and reads it back.

use sipdg::mesh::{build_lshape_mesh, read_mesh, refine_uniform, write_mesh, Mesh};

pub fn run_example() -> sipdg::Result<Mesh> {
    let mesh = build_lshape_mesh(2)?;
    let m = mesh.metrics();
    println!(
        "{} vertices, {} triangles, {} edges ({} on the boundary)",
        mesh.vertices().len(),
        mesh.num_elements(),
        mesh.edges().len(),
        mesh.edges().iter().filter(|e| e.is_boundary()).count()
    );
    println!(
        "h = {:.6}, max h_K/rho_K = {:.6}, max h/h_K = {}",
        m.h, m.max_shape_ratio, m.quasi_uniformity
    );

    let mut text = Vec::new();
    write_mesh(&mesh, &mut text)?;
    let back = read_mesh(text.as_slice())?;
    assert_eq!(back.vertices(), mesh.vertices());
    assert_eq!(back.triangles(), mesh.triangles());
    print!("{}", String::from_utf8_lossy(&text).lines().take(4).collect::<Vec<_>>().join("\n"));
    println!("\n...");

    let fine = refine_uniform(&back)?;
    println!("refined: {} triangles, h = {:.6}", fine.num_elements(), fine.h());
    Ok(fine)
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
