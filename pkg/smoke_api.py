#!/usr/bin/env python3
"""
Smoke script for a running GRNF API
Usage: python smoke_api.py [M] [base_url]
"""

import sys

import httpx


def smoke_api(M: int = 256, base_url: str = "http://localhost:8000"):
    """Build a map, then embed and compare a path and an edgeless graph with it"""

    path = {"n": 5, "edges": [{"src": i, "dst": i + 1} for i in range(4)]}
    empty = {"n": 5, "edges": []}

    print(f"🧪 Checking GRNF API at {base_url} with M={M}")

    try:
        status = httpx.get(f"{base_url}/status").json()
        print(f"📊 Tracking enabled: {status['tracking_enabled']}, workers: {status['workers']}")

        response = httpx.post(f"{base_url}/maps", json={"M": M, "seed": 0}, timeout=60)
        if response.status_code != 200:
            print(f"❌ Map build failed with status: {response.status_code}")
            print(f"Response: {response.text}")
            return False
        document = response.json()
        print(f"✅ Map built: {len(document['params'])} features")

        response = httpx.post(f"{base_url}/distance", json={"map": document, "g1": path, "g2": empty}, timeout=60)
        if response.status_code != 200:
            print(f"❌ Distance failed with status: {response.status_code}")
            print(f"Response: {response.text}")
            return False
        print(f"📏 Estimated distance path-vs-empty: {response.json()['value']:.6f}")

        response = httpx.post(f"{base_url}/gram", json={"map": document, "graphs": [path, empty]}, timeout=60)
        print(f"🧮 Gram matrix: {response.json()['matrix']}")
        return True

    except Exception as e:
        print(f"❌ Error talking to the API: {e}")
        return False


if __name__ == "__main__":
    M = int(sys.argv[1]) if len(sys.argv) > 1 else 256
    base_url = sys.argv[2] if len(sys.argv) > 2 else "http://localhost:8000"

    sys.exit(0 if smoke_api(M, base_url) else 1)
