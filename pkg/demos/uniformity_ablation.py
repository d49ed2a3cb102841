"""Ablate the repulsion term on a clustered plane.

The input is a flat cloud whose points bunch into Gaussian blobs. With the
repulsion weight mu set to zero the update has nothing to do on a perfectly
flat cloud and the clumps persist; with mu > 0 the tangential repulsion
spreads each clump toward an even spacing. The script prints the mean
nearest-neighbor spacing inside the initially clumped regions.

Run: python3 demos/uniformity_ablation.py
"""

import numpy as np

from cloudfilter import (
    FilterParams,
    build_neighbor_index,
    filter_cloud,
    make_clustered_plane,
)


def spacing_stats(points):
    d = build_neighbor_index(points).nearest_distances()
    return d.mean(), d.min()


def main():
    cloud = make_clustered_plane(clusters=8, points_per_cluster=50, seed=0)
    mean0, min0 = spacing_stats(cloud.points)
    print(f"clustered plane: {len(cloud)} points in 8 blobs")
    print(f"input NN spacing: mean {mean0:.4f}, min {min0:.4f}\n")

    for mu in (0.0, 0.1, 0.3):
        params = FilterParams(k=30, mu=mu, t=10)
        out, history = filter_cloud(cloud, cloud.normals, params)
        mean_d, min_d = spacing_stats(out.points)
        moved = np.linalg.norm(out.points - cloud.points, axis=1).mean()
        print(
            f"mu={mu:<4}  NN spacing mean {mean_d:.4f}  min {min_d:.4f}"
            f"  mean displacement {moved:.4f}"
        )

    print(
        "\nWith mu=0 the flat cloud is a fixed point of the update; raising mu"
        "\nspreads the clumps apart (watch the min spacing climb). Note the"
        "\ncloud has no boundary constraint, so large mu also dilates the"
        "\noutline of an open patch like this one."
    )


if __name__ == "__main__":
    main()
