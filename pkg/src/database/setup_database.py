#!/usr/bin/env python3
"""
Run-tracking database setup
Creates the experiment_runs table on GRNF_DATABASE_URL
"""

import sys

from src.database.database import create_tables, get_database_url, test_connection


def setup_tracking_database() -> bool:
    """Check the configured database and create the tracking tables"""
    url = get_database_url()
    if url is None:
        print("⚠️  GRNF_DATABASE_URL is not set. Copy config/.env.example to config/.env and set it")
        return False

    print(f"🔍 Checking tracking database {url.split('@')[-1]}")
    if not test_connection():
        print("❌ Database connection failed")
        return False

    try:
        print("📋 Creating tables...")
        create_tables()
        print("✅ All tables created successfully")
        return True
    except Exception as e:
        print(f"❌ Database setup failed: {e}")
        return False


def main():
    print("🚀 GRNF - Run Tracking Database Setup")
    print("=" * 50)

    if setup_tracking_database():
        print("\n🎉 Database setup completed successfully!")
        print("🚀 Experiments started with `grnf experiment ...` are now recorded")
        return 0
    print("\n❌ Database setup failed!")
    return 1


if __name__ == "__main__":
    sys.exit(main())
