from relsnd.cli import main

main()
