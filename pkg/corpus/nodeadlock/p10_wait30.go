// Pattern P10 (wait30): sleeps on a timer channel, then exits.
// Expected: no deadlock
package main

import "fmt"
import "time"

func main() {
	fmt.Println("waiting")
	<-time.After(30)
	fmt.Println("done")
}
